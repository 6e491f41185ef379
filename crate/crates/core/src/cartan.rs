//! Finite Cartan data, simple reflections and Weyl-group elements.
//!
//! Weyl elements are stored as integer matrices acting on root coordinates:
//! a root vector `β = Σ β_j α_j` is a column vector and the simple reflection
//! `i` sends it to `β - ⟨β⟩_i α_i` with `⟨β⟩_i = Σ_j a_ij β_j`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Built-in type labels accepted by [`CartanData::from_type`].
pub const BUILTIN_TYPES: [&str; 7] = ["A1", "A1xA1", "A2", "B2", "G2", "A3", "B3"];

/// The rank-2 built-ins, one per value of `m_{s,t}`.
pub const RANK2_TYPES: [&str; 4] = ["A1xA1", "A2", "B2", "G2"];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCartan")]
pub struct CartanData {
    labels: Vec<String>,
    matrix: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawCartan {
    #[serde(default)]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<i64>>,
}

impl TryFrom<RawCartan> for CartanData {
    type Error = Error;

    fn try_from(raw: RawCartan) -> Result<Self> {
        let labels = raw
            .labels
            .unwrap_or_else(|| (1..=raw.matrix.len()).map(|i| i.to_string()).collect());
        CartanData::from_matrix(labels, raw.matrix)
    }
}

impl CartanData {
    /// Looks up a built-in type. `A1×A1`, `A1xA1` and `A1*A1` name the same type.
    pub fn from_type(label: &str) -> Result<Self> {
        let normalized: String = label
            .trim()
            .chars()
            .map(|c| match c {
                '×' | '*' | 'X' | 'x' => 'x',
                c => c.to_ascii_uppercase(),
            })
            .collect();
        let matrix: Vec<Vec<i64>> = match normalized.as_str() {
            "A1" => vec![vec![2]],
            "A1xA1" => vec![vec![2, 0], vec![0, 2]],
            "A2" => vec![vec![2, -1], vec![-1, 2]],
            "B2" | "C2" => vec![vec![2, -1], vec![-2, 2]],
            "G2" => vec![vec![2, -3], vec![-1, 2]],
            "A3" => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            "B3" => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]],
            _ => return Err(Error::UnknownCartanType(label.to_string())),
        };
        let labels = (1..=matrix.len()).map(|i| i.to_string()).collect();
        Self::from_matrix(labels, matrix)
    }

    /// Validates an explicit matrix.
    pub fn from_matrix(labels: Vec<String>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let rank = matrix.len();
        if rank == 0 {
            return Err(Error::InvalidCartan("rank must be positive".into()));
        }
        if labels.len() != rank {
            return Err(Error::InvalidCartan(format!(
                "{} labels for a rank-{rank} matrix",
                labels.len()
            )));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::InvalidCartan(format!("duplicate label `{label}`")));
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidCartan(format!("row {} has length {}", i + 1, row.len())));
            }
            if row[i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", i + 1)));
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                if i == j {
                    continue;
                }
                let (a, b) = (matrix[i][j], matrix[j][i]);
                if a > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "off-diagonal entry ({}, {}) is positive",
                        i + 1,
                        j + 1
                    )));
                }
                if (a == 0) != (b == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "entries ({0}, {1}) and ({1}, {0}) must vanish together",
                        i + 1,
                        j + 1
                    )));
                }
                if a * b > 3 {
                    return Err(Error::InvalidCartan(format!(
                        "rank-2 subsystem ({}, {}) is not of finite type",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { labels, matrix })
    }

    /// Parses either a built-in label or the JSON form
    /// `{"labels": [...], "matrix": [[...]]}`.
    pub fn parse(input: &str) -> Result<Self> {
        let trimmed = input.trim();
        if trimmed.starts_with('{') {
            Ok(serde_json::from_str(trimmed)?)
        } else {
            Self::from_type(trimmed)
        }
    }

    /// Accepts a built-in label, a bare matrix, or `{"labels", "matrix"}`.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        match value {
            serde_json::Value::String(s) => Self::from_type(s),
            serde_json::Value::Array(_) => {
                let matrix: Vec<Vec<i64>> = serde_json::from_value(value.clone())?;
                let labels = (1..=matrix.len()).map(|i| i.to_string()).collect();
                Self::from_matrix(labels, matrix)
            }
            other => Ok(serde_json::from_value(other.clone())?),
        }
    }

    /// The built-in label naming exactly this data, if any.
    pub fn builtin_name(&self) -> Option<&'static str> {
        BUILTIN_TYPES
            .iter()
            .copied()
            .find(|t| Self::from_type(t).is_ok_and(|c| &c == self))
    }

    /// The label when built in, otherwise `{"labels", "matrix"}`.
    pub fn to_json(&self) -> serde_json::Value {
        match self.builtin_name() {
            Some(name) => serde_json::Value::String(name.to_string()),
            None => serde_json::json!({ "labels": self.labels, "matrix": self.matrix }),
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Parse(format!("unknown reflection label `{label}`")))
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, rank: self.rank() })
        }
    }

    pub fn check_word(&self, word: &[usize]) -> Result<()> {
        word.iter().try_for_each(|&i| self.check_index(i))
    }

    /// Matrix of the simple reflection `i`.
    pub fn reflection(&self, i: usize) -> Result<WeylElement> {
        self.check_index(i)?;
        let r = self.rank();
        let mut m = identity_matrix(r);
        for j in 0..r {
            m[i][j] -= self.matrix[i][j];
        }
        Ok(WeylElement { matrix: m })
    }

    /// Product of simple reflections, read left to right.
    pub fn weyl_from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut w = WeylElement::identity(self.rank());
        for &i in word {
            w = w.compose(&self.reflection(i)?)?;
        }
        Ok(w)
    }

    /// Multiplicative order of `st`, found by repeated multiplication.
    pub fn m_order(&self, s: usize, t: usize) -> Result<usize> {
        self.check_index(s)?;
        self.check_index(t)?;
        if s == t {
            return Err(Error::SameReflection(s));
        }
        let st = self.reflection(s)?.compose(&self.reflection(t)?)?;
        let mut power = st.clone();
        for k in 1..=12 {
            if power.is_identity() {
                return Ok(k);
            }
            power = power.compose(&st)?;
        }
        Err(Error::InvalidCartan(format!(
            "product of reflections {} and {} has infinite order",
            self.labels[s], self.labels[t]
        )))
    }

    /// Table value of `m_{s,t}` read off from `a_st a_ts`.
    pub fn m_table(&self, s: usize, t: usize) -> Result<usize> {
        self.check_index(s)?;
        self.check_index(t)?;
        if s == t {
            return Err(Error::SameReflection(s));
        }
        Ok(match self.matrix[s][t] * self.matrix[t][s] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            _ => unreachable!("validated at construction"),
        })
    }

    /// The alternating word `(s, t, s, ...)` of length `m_{s,t}`.
    pub fn braid_word(&self, s: usize, t: usize) -> Result<BraidWord> {
        let m = self.m_order(s, t)?;
        let word = (0..m).map(|k| if k % 2 == 0 { s } else { t }).collect();
        Ok(BraidWord { s, t, word })
    }

    /// Root-coordinate vector of `w(α_j)`.
    pub fn act_on_simple_root(&self, w: &WeylElement, j: usize) -> Vec<i64> {
        (0..self.rank()).map(|i| w.matrix[i][j]).collect()
    }
}

impl fmt::Display for CartanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

fn identity_matrix(r: usize) -> Vec<Vec<i64>> {
    (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect()
}

/// Element of the Weyl group as an integer matrix on root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        Self { matrix: identity_matrix(rank) }
    }

    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Self {
        Self { matrix }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == identity_matrix(self.rank())
    }

    /// Matrix product `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> Result<WeylElement> {
        let r = self.rank();
        if other.rank() != r {
            return Err(Error::RankMismatch { left: r, right: other.rank() });
        }
        let matrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(WeylElement { matrix })
    }

    /// Image of a root-coordinate vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Multiplicative order, searched up to `bound`.
    pub fn order(&self, bound: usize) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=bound {
            if p.is_identity() {
                return Some(k);
            }
            p = p.compose(self).ok()?;
        }
        None
    }
}

/// Alternating word of length `m_{s,t}` starting with `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    pub s: usize,
    pub t: usize,
    pub word: Vec<usize>,
}

impl BraidWord {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent order oracle: multiply plain integer matrices until identity.
    fn brute_order(c: &CartanData, s: usize, t: usize) -> usize {
        let r = c.rank();
        let refl = |i: usize| -> Vec<Vec<i64>> {
            let mut m = identity_matrix(r);
            for j in 0..r {
                m[i][j] -= c.entry(i, j);
            }
            m
        };
        let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..r)
                .map(|i| (0..r).map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum()).collect())
                .collect()
        };
        let st = mul(&refl(s), &refl(t));
        let mut p = st.clone();
        let mut k = 1;
        while p != identity_matrix(r) {
            p = mul(&p, &st);
            k += 1;
            assert!(k < 100);
        }
        k
    }

    #[test]
    fn builtin_types_are_valid() {
        for label in BUILTIN_TYPES {
            let c = CartanData::from_type(label).unwrap();
            assert!(c.rank() >= 1);
        }
        let a2 = CartanData::from_type("A2").unwrap();
        assert_eq!(a2.entry(0, 1), -1);
        assert_eq!(a2.entry(1, 0), -1);
        let a1a1 = CartanData::from_type("A1×A1").unwrap();
        assert_eq!(a1a1.entry(0, 1), 0);
        let g2 = CartanData::from_type("G2").unwrap();
        let mut off = [g2.entry(0, 1), g2.entry(1, 0)];
        off.sort();
        assert_eq!(off, [-3, -1]);
    }

    #[test]
    fn unknown_label_is_rejected() {
        assert!(matches!(CartanData::from_type("E9"), Err(Error::UnknownCartanType(_))));
    }

    #[test]
    fn invalid_matrices_are_rejected() {
        let l = vec!["1".to_string(), "2".to_string()];
        assert!(CartanData::from_matrix(l.clone(), vec![vec![2, -1], vec![0, 2]]).is_err());
        assert!(CartanData::from_matrix(l.clone(), vec![vec![2, 1], vec![1, 2]]).is_err());
        assert!(CartanData::from_matrix(l.clone(), vec![vec![2, -2], vec![-2, 2]]).is_err());
        assert!(CartanData::from_matrix(l.clone(), vec![vec![1, -1], vec![-1, 2]]).is_err());
        assert!(CartanData::from_matrix(vec!["a".into(), "a".into()], vec![vec![2, 0], vec![0, 2]]).is_err());
    }

    #[test]
    fn json_input_round_trips() {
        let c = CartanData::parse(r#"{"labels":["1","2"],"matrix":[[2,-1],[-1,2]]}"#).unwrap();
        assert_eq!(c, CartanData::from_type("A2").unwrap());
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(CartanData::parse(&text).unwrap(), c);
        assert!(CartanData::parse(r#"{"matrix":[[2,1],[-1,2]]}"#).is_err());
    }

    #[test]
    fn m_order_matches_brute_force_and_table() {
        for (label, expected) in [("A1xA1", 2), ("A2", 3), ("B2", 4), ("G2", 6)] {
            let c = CartanData::from_type(label).unwrap();
            assert_eq!(brute_order(&c, 0, 1), expected);
            assert_eq!(c.m_order(0, 1).unwrap(), expected);
            assert_eq!(c.m_order(1, 0).unwrap(), expected);
            assert_eq!(c.m_table(0, 1).unwrap(), expected);
        }
        let b3 = CartanData::from_type("B3").unwrap();
        assert_eq!(b3.m_order(0, 2).unwrap(), 2);
        assert_eq!(b3.m_order(1, 2).unwrap(), 4);
        assert!(matches!(b3.m_order(1, 1), Err(Error::SameReflection(1))));
    }

    #[test]
    fn words_and_braid_relations() {
        let a2 = CartanData::from_type("A2").unwrap();
        assert!(a2.weyl_from_word(&[]).unwrap().is_identity());
        assert!(a2.weyl_from_word(&[0, 0]).unwrap().is_identity());
        assert_eq!(a2.weyl_from_word(&[0, 1, 0]).unwrap(), a2.weyl_from_word(&[1, 0, 1]).unwrap());
        assert!(a2.weyl_from_word(&[2]).is_err());
        for label in BUILTIN_TYPES {
            let c = CartanData::from_type(label).unwrap();
            for s in 0..c.rank() {
                assert!(c.reflection(s).unwrap().compose(&c.reflection(s).unwrap()).unwrap().is_identity());
                for t in 0..c.rank() {
                    if s == t {
                        continue;
                    }
                    let st = c.braid_word(s, t).unwrap();
                    let ts = c.braid_word(t, s).unwrap();
                    assert_eq!(c.weyl_from_word(&st.word).unwrap(), c.weyl_from_word(&ts.word).unwrap());
                }
            }
        }
    }

    #[test]
    fn braid_words_have_expected_shape() {
        let a2 = CartanData::from_type("A2").unwrap();
        assert_eq!(a2.braid_word(0, 1).unwrap().word, vec![0, 1, 0]);
        let b2 = CartanData::from_type("B2").unwrap();
        assert_eq!(b2.braid_word(0, 1).unwrap().word, vec![0, 1, 0, 1]);
        let a1a1 = CartanData::from_type("A1xA1").unwrap();
        assert_eq!(a1a1.braid_word(0, 1).unwrap().word, vec![0, 1]);
        assert!(a1a1.braid_word(0, 0).is_err());
    }

    #[test]
    fn compose_checks() {
        let a2 = CartanData::from_type("A2").unwrap();
        let s = a2.reflection(0).unwrap();
        let t = a2.reflection(1).unwrap();
        let id = WeylElement::identity(2);
        assert_eq!(id.compose(&s).unwrap(), s);
        assert!(s.compose(&s).unwrap().is_identity());
        assert_eq!(s.compose(&t).unwrap().order(20), Some(3));
        assert!(id.compose(&WeylElement::identity(3)).is_err());
        // s(α_t) = α_s + α_t in A2
        assert_eq!(a2.act_on_simple_root(&s, 1), vec![1, 1]);
    }

    #[test]
    fn word_map_is_a_monoid_homomorphism() {
        let g2 = CartanData::from_type("G2").unwrap();
        let u = [0, 1, 1, 0, 1];
        let v = [1, 0, 0, 1];
        let uv: Vec<usize> = u.iter().chain(v.iter()).copied().collect();
        let lhs = g2.weyl_from_word(&uv).unwrap();
        let rhs = g2.weyl_from_word(&u).unwrap().compose(&g2.weyl_from_word(&v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
