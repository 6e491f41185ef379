//! Left-R-linear graded maps between Bott–Samelson bimodules, stored as
//! matrices over R, and the one-color generators.
//!
//! Column `ε` of a morphism holds the image of the source basis element
//! `b_ε`. Generators are built by applying their pure-tensor rule to each
//! basis tensor and normalizing the result over the target sequence.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::bimodule::{
    add_coeff, all_ones, basis_slots, bits_to_string, normalize_slots, parse_bits, parse_seq_json, BSElement,
    MAX_SEQ_LEN,
};
use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::poly::{demazure, half_root, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    cartan: Arc<CartanData>,
    source: Vec<usize>,
    target: Vec<usize>,
    degree: i64,
    columns: Vec<BTreeMap<u32, Poly>>,
}

/// A matrix position where two morphisms disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDifference {
    pub target_bits: String,
    pub source_bits: String,
    pub left: Poly,
    pub right: Poly,
}

impl fmt::Display for EntryDifference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "entry ({}|{}): {} vs {}", self.target_bits, self.source_bits, self.left, self.right)
    }
}

/// Column `ε` is `b_ε · f` in the ε-basis.
pub(crate) fn right_mul_table(c: &Arc<CartanData>, seq: &[usize], f: &Poly) -> Result<Vec<BTreeMap<u32, Poly>>> {
    let r = c.rank();
    (0..=all_ones(seq.len()))
        .map(|bits| {
            let mut slots = basis_slots(r, seq, bits);
            let last = slots.len() - 1;
            slots[last] = &slots[last] * f;
            normalize_slots(c, seq, &slots)
        })
        .collect()
}

fn check_len(c: &CartanData, seq: &[usize]) -> Result<()> {
    if seq.len() > MAX_SEQ_LEN {
        return Err(Error::SizeBoundExceeded { len: seq.len(), bound: MAX_SEQ_LEN });
    }
    c.check_word(seq)
}

impl Morphism {
    /// Builds a morphism from its columns (one per source basis element).
    pub fn from_columns(
        cartan: Arc<CartanData>,
        source: Vec<usize>,
        target: Vec<usize>,
        degree: i64,
        columns: Vec<BTreeMap<u32, Poly>>,
    ) -> Result<Self> {
        check_len(&cartan, &source)?;
        check_len(&cartan, &target)?;
        if columns.len() != 1 << source.len() {
            return Err(Error::LengthMismatch { expected: 1 << source.len(), got: columns.len() });
        }
        let mask = !all_ones(target.len());
        let mut cleaned = Vec::with_capacity(columns.len());
        for col in columns {
            let mut out = BTreeMap::new();
            for (bits, p) in col {
                if bits & mask != 0 {
                    return Err(Error::LengthMismatch {
                        expected: target.len(),
                        got: 32 - bits.leading_zeros() as usize,
                    });
                }
                if p.rank() != cartan.rank() {
                    return Err(Error::RankMismatch { left: cartan.rank(), right: p.rank() });
                }
                add_coeff(&mut out, bits, &p);
            }
            cleaned.push(out);
        }
        Ok(Self { cartan, source, target, degree, columns: cleaned })
    }

    pub(crate) fn from_columns_unchecked(
        cartan: Arc<CartanData>,
        source: Vec<usize>,
        target: Vec<usize>,
        degree: i64,
        columns: Vec<BTreeMap<u32, Poly>>,
    ) -> Self {
        Self { cartan, source, target, degree, columns }
    }

    /// Builds a morphism from a function on pure tensors: `rule` receives the
    /// slots of a source basis tensor and returns a list of target tensors.
    fn from_tensor_rule(
        cartan: &Arc<CartanData>,
        source: &[usize],
        target: &[usize],
        degree: i64,
        rule: impl Fn(Vec<Poly>) -> Result<Vec<Vec<Poly>>>,
    ) -> Result<Self> {
        check_len(cartan, source)?;
        check_len(cartan, target)?;
        let r = cartan.rank();
        let mut columns = Vec::with_capacity(1 << source.len());
        for bits in 0..=all_ones(source.len()) {
            let mut col = BTreeMap::new();
            for tensor in rule(basis_slots(r, source, bits))? {
                for (b, p) in normalize_slots(cartan, target, &tensor)? {
                    add_coeff(&mut col, b, &p);
                }
            }
            columns.push(col);
        }
        Ok(Self { cartan: cartan.clone(), source: source.to_vec(), target: target.to_vec(), degree, columns })
    }

    pub fn cartan(&self) -> &Arc<CartanData> {
        &self.cartan
    }

    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn columns(&self) -> &[BTreeMap<u32, Poly>] {
        &self.columns
    }

    /// Image of the source basis element `b_ε`.
    pub fn column(&self, source_bits: u32) -> BSElement {
        BSElement::from_parts_unchecked(
            self.cartan.clone(),
            self.target.clone(),
            self.columns[source_bits as usize].clone(),
        )
    }

    pub fn entry(&self, target_bits: u32, source_bits: u32) -> Poly {
        self.columns[source_bits as usize]
            .get(&target_bits)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.cartan.rank()))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    /// `M(m) = Σ_ε c_ε · M(b_ε)`.
    pub fn apply(&self, m: &BSElement) -> Result<BSElement> {
        if m.cartan() != &self.cartan {
            return Err(Error::RankMismatch { left: self.cartan.rank(), right: m.rank() });
        }
        if m.seq() != self.source.as_slice() {
            return Err(Error::SequenceMismatch(format!(
                "morphism source {:?}, element over {:?}",
                self.source,
                m.seq()
            )));
        }
        let mut out = BTreeMap::new();
        for (eps, c) in m.coeffs() {
            for (delta, p) in &self.columns[*eps as usize] {
                add_coeff(&mut out, *delta, &(c * p));
            }
        }
        Ok(BSElement::from_parts_unchecked(self.cartan.clone(), self.target.clone(), out))
    }

    /// Checks `M(b_ε · α_j) = M(b_ε) · α_j` for every basis element and simple root.
    pub fn is_bimodule_morphism(&self) -> bool {
        self.bimodule_failure().is_none()
    }

    /// The first `(ε, j)` at which right-linearity fails.
    ///
    /// Right multiplication by `α_j` is tabulated once on each basis, so the
    /// check reduces to comparing the matrix products `M·R_src` and `R_tgt·M`.
    pub fn bimodule_failure(&self) -> Option<(String, usize)> {
        let r = self.cartan.rank();
        for j in 0..r {
            let alpha = Poly::var(r, j);
            let (Ok(rs), Ok(rt)) = (
                right_mul_table(&self.cartan, &self.source, &alpha),
                right_mul_table(&self.cartan, &self.target, &alpha),
            ) else {
                return Some((String::new(), j));
            };
            for (eps, image) in self.columns.iter().enumerate() {
                let mut lhs = BTreeMap::new();
                for (eps2, f) in &rs[eps] {
                    for (delta, p) in &self.columns[*eps2 as usize] {
                        add_coeff(&mut lhs, *delta, &(f * p));
                    }
                }
                let mut rhs = BTreeMap::new();
                for (delta, p) in image {
                    for (delta2, f) in &rt[*delta as usize] {
                        add_coeff(&mut rhs, *delta2, &(p * f));
                    }
                }
                if lhs != rhs {
                    return Some((bits_to_string(eps as u32, self.source.len()), j));
                }
            }
        }
        None
    }

    /// True iff entry `(δ, ε)` is homogeneous of degree `2|ε| − 2|δ| + d` or zero.
    pub fn degree_check(&self) -> bool {
        self.columns.iter().enumerate().all(|(eps, col)| {
            col.iter().all(|(delta, p)| {
                let d = 2 * i64::from((eps as u32).count_ones()) - 2 * i64::from(delta.count_ones()) + self.degree;
                p.is_homogeneous_of(d)
            })
        })
    }

    /// First entry where `self` and `other` differ, scanning columns then rows.
    pub fn first_difference(&self, other: &Morphism) -> Result<Option<EntryDifference>> {
        if self.source != other.source || self.target != other.target || self.cartan != other.cartan {
            return Err(Error::BoundaryMismatch(format!(
                "{:?} → {:?} vs {:?} → {:?}",
                self.source, self.target, other.source, other.target
            )));
        }
        let r = self.cartan.rank();
        let zero = Poly::zero(r);
        for (eps, (a, b)) in self.columns.iter().zip(&other.columns).enumerate() {
            let keys: std::collections::BTreeSet<u32> = a.keys().chain(b.keys()).copied().collect();
            for delta in keys {
                let x = a.get(&delta).unwrap_or(&zero);
                let y = b.get(&delta).unwrap_or(&zero);
                if x != y {
                    return Ok(Some(EntryDifference {
                        target_bits: bits_to_string(delta, self.target.len()),
                        source_bits: bits_to_string(eps as u32, self.source.len()),
                        left: x.clone(),
                        right: y.clone(),
                    }));
                }
            }
        }
        Ok(None)
    }

    /// `M ↦ M·f` on coefficients: the left action of `f` on the target.
    pub fn left_mul(&self, f: &Poly) -> Result<Morphism> {
        if f.rank() != self.cartan.rank() {
            return Err(Error::RankMismatch { left: self.cartan.rank(), right: f.rank() });
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(b, p)| (*b, f * p)).filter(|(_, p)| !p.is_zero()).collect())
            .collect();
        let deg = match f.degree() {
            crate::poly::Degree::Homogeneous(d) => self.degree + i64::from(d),
            _ => self.degree,
        };
        Ok(Morphism { columns, degree: deg, ..self.clone() })
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Map::new();
        for (eps, col) in self.columns.iter().enumerate() {
            for (delta, p) in col {
                let key = format!(
                    "{}|{}",
                    bits_to_string(*delta, self.target.len()),
                    bits_to_string(eps as u32, self.source.len())
                );
                entries.insert(key, Value::String(p.to_string()));
            }
        }
        json!({
            "source": self.source.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "target": self.target.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "degree": self.degree,
            "entries": entries,
        })
    }

    pub fn from_json(cartan: Arc<CartanData>, value: &Value) -> Result<Self> {
        let field = |k: &str| value.get(k).ok_or_else(|| Error::Schema(format!("missing `{k}`")));
        let source = parse_seq_json(&cartan, field("source")?)?;
        let target = parse_seq_json(&cartan, field("target")?)?;
        let degree = field("degree")?.as_i64().ok_or_else(|| Error::Schema("`degree` must be an integer".into()))?;
        let entries = field("entries")?
            .as_object()
            .ok_or_else(|| Error::Schema("`entries` must be an object".into()))?;
        let mut columns = vec![BTreeMap::new(); 1 << source.len()];
        for (key, v) in entries {
            let (d, e) = key
                .split_once('|')
                .ok_or_else(|| Error::Schema(format!("entry key `{key}` must look like δ|ε")))?;
            let (delta, dl) = parse_bits(d)?;
            let (eps, el) = parse_bits(e)?;
            if dl != target.len() || el != source.len() {
                return Err(Error::Schema(format!("entry key `{key}` has the wrong length")));
            }
            let p = Poly::from_json(v, cartan.rank())?;
            add_coeff(&mut columns[eps as usize], delta, &p);
        }
        Self::from_columns(cartan, source, target, degree, columns)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

pub fn identity(cartan: &Arc<CartanData>, seq: &[usize]) -> Result<Morphism> {
    check_len(cartan, seq)?;
    let r = cartan.rank();
    let columns = (0..=all_ones(seq.len())).map(|b| BTreeMap::from([(b, Poly::one(r))])).collect();
    Ok(Morphism::from_columns_unchecked(cartan.clone(), seq.to_vec(), seq.to_vec(), 0, columns))
}

/// `M2 ∘ M1`.
pub fn compose(m2: &Morphism, m1: &Morphism) -> Result<Morphism> {
    if m1.cartan != m2.cartan {
        return Err(Error::RankMismatch { left: m1.cartan.rank(), right: m2.cartan.rank() });
    }
    if m1.target != m2.source {
        return Err(Error::BoundaryMismatch(format!(
            "cannot compose: inner target {:?}, outer source {:?}",
            m1.target, m2.source
        )));
    }
    let columns = m1
        .columns
        .iter()
        .map(|col| {
            let mut out = BTreeMap::new();
            for (mid, c) in col {
                for (delta, p) in &m2.columns[*mid as usize] {
                    add_coeff(&mut out, *delta, &(c * p));
                }
            }
            out
        })
        .collect();
    Ok(Morphism::from_columns_unchecked(
        m1.cartan.clone(),
        m1.source.clone(),
        m2.target.clone(),
        m1.degree + m2.degree,
        columns,
    ))
}

fn check_strand(seq: &[usize], strand: usize) -> Result<()> {
    if strand == 0 || strand > seq.len() {
        return Err(Error::StrandOutOfRange { strand, len: seq.len() });
    }
    Ok(())
}

/// Removes strand `strand` (1-based), multiplying the slots on either side.
pub fn dot_top(cartan: &Arc<CartanData>, seq: &[usize], strand: usize) -> Result<Morphism> {
    check_strand(seq, strand)?;
    let mut target = seq.to_vec();
    target.remove(strand - 1);
    Morphism::from_tensor_rule(cartan, seq, &target, 0, |mut slots| {
        let right = slots.remove(strand);
        slots[strand - 1] = &slots[strand - 1] * &right;
        Ok(vec![slots])
    })
}

/// Inserts a strand of color `color` at gap `position` (0-based, `0..=len`),
/// replacing the slot content `d` there by `d·x_u ⊗ 1 + d ⊗ x_u`.
pub fn dot_bot(cartan: &Arc<CartanData>, seq: &[usize], position: usize, color: usize) -> Result<Morphism> {
    if position > seq.len() {
        return Err(Error::InvalidPosition { position, len: seq.len() });
    }
    cartan.check_index(color)?;
    let mut target = seq.to_vec();
    target.insert(position, color);
    let x = half_root(cartan.rank(), color);
    let one = Poly::one(cartan.rank());
    Morphism::from_tensor_rule(cartan, seq, &target, 2, |slots| {
        let d = &slots[position];
        let mut first = slots.clone();
        first[position] = d * &x;
        first.insert(position + 1, one.clone());
        let mut second = slots.clone();
        second.insert(position + 1, x.clone());
        Ok(vec![first, second])
    })
}

/// Duplicates strand `strand` (1-based) by inserting the slot `1` after it.
pub fn split(cartan: &Arc<CartanData>, seq: &[usize], strand: usize) -> Result<Morphism> {
    check_strand(seq, strand)?;
    let mut target = seq.to_vec();
    target.insert(strand, seq[strand - 1]);
    let one = Poly::one(cartan.rank());
    Morphism::from_tensor_rule(cartan, seq, &target, 0, |mut slots| {
        slots.insert(strand, one.clone());
        Ok(vec![slots])
    })
}

/// Merges strands `strand` and `strand + 1` (1-based, equal colors):
/// `(a, b, c) ↦ (a·∂_u(b), c)`.
pub fn merge(cartan: &Arc<CartanData>, seq: &[usize], strand: usize) -> Result<Morphism> {
    if strand == 0 || strand + 1 > seq.len() {
        return Err(Error::StrandOutOfRange { strand, len: seq.len() });
    }
    let u = seq[strand - 1];
    if seq[strand] != u {
        return Err(Error::AdjacentColorsDiffer { strand });
    }
    let mut target = seq.to_vec();
    target.remove(strand);
    Morphism::from_tensor_rule(cartan, seq, &target, -2, |mut slots| {
        let b = slots.remove(strand);
        let db = demazure(cartan, u, &b)?;
        slots[strand - 1] = &slots[strand - 1] * &db;
        Ok(vec![slots])
    })
}

/// Multiplication of the slot at gap `position` (0-based) by a homogeneous `f`;
/// gap 0 is the left action and gap `len` the right action.
pub fn slot_multiplication(cartan: &Arc<CartanData>, seq: &[usize], position: usize, f: &Poly) -> Result<Morphism> {
    if position > seq.len() {
        return Err(Error::InvalidPosition { position, len: seq.len() });
    }
    let degree = match f.degree() {
        crate::poly::Degree::Homogeneous(d) => i64::from(d),
        crate::poly::Degree::NegInfinity => 0,
        crate::poly::Degree::Inhomogeneous => {
            return Err(Error::Parse(format!("{f} is not homogeneous")));
        }
    };
    Morphism::from_tensor_rule(cartan, seq, seq, degree, |mut slots| {
        slots[position] = &slots[position] * f;
        Ok(vec![slots])
    })
}

/// `id_left ⊗ M ⊗ id_right`, for a bimodule morphism `M`.
pub fn extend(m: &Morphism, left: &[usize], right: &[usize]) -> Result<Morphism> {
    let cartan = m.cartan.clone();
    let r = cartan.rank();
    let mut source = left.to_vec();
    source.extend_from_slice(&m.source);
    source.extend_from_slice(right);
    let mut target = left.to_vec();
    target.extend_from_slice(&m.target);
    target.extend_from_slice(right);
    check_len(&cartan, &source)?;
    check_len(&cartan, &target)?;
    if left.is_empty() && right.is_empty() {
        return Ok(m.clone());
    }
    let (p, k) = (left.len(), m.source.len());
    let basis = |seq: &[usize], bits: u32| {
        BSElement::from_parts_unchecked(cartan.clone(), seq.to_vec(), BTreeMap::from([(bits, Poly::one(r))]))
    };
    let mut columns = Vec::with_capacity(1 << source.len());
    for eps in 0..=all_ones(source.len()) {
        let alpha = eps & all_ones(p);
        let mid = eps >> p & all_ones(k);
        let beta = eps >> (p + k);
        let image = basis(left, alpha).concat(&m.column(mid))?.concat(&basis(right, beta))?;
        columns.push(image.into_coeffs());
    }
    Ok(Morphism::from_columns_unchecked(cartan, source, target, m.degree, columns))
}

pub fn apply(m: &Morphism, x: &BSElement) -> Result<BSElement> {
    m.apply(x)
}

pub fn is_bimodule_morphism(m: &Morphism) -> bool {
    m.is_bimodule_morphism()
}

pub fn morphism_degree_check(m: &Morphism) -> bool {
    m.degree_check()
}
