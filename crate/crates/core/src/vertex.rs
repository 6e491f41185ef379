//! The two-color `2m`-valent vertex `f_{s,t}: B(s,t,…) → B(t,s,…)` and the
//! Jones–Wenzl projector `JW_{s,t} = f_{t,s} ∘ f_{s,t}`.
//!
//! The vertex is found as the kernel of a linear system. Its unknowns are the
//! rational coefficients of every monomial in every entry of the columns
//! `b_ε` with `ε_n = 0`; the remaining columns are forced by
//! `b_{(e,1)} = b_{(e,0)} · x_{s_n}`. The equations say that the matrix
//! commutes with right multiplication by every simple root. The scalar is
//! fixed by requiring the normal element to map to the normal element plus
//! lower terms.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bimodule::all_ones;
use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::linalg::{crt, inv_mod, mul_mod, rational_reconstruct, Echelon, ModEchelon, PRIMES};
use crate::morphism::{compose, right_mul_table, Morphism};
use crate::poly::{half_root, Monomial, Poly, Rational};

/// Linear combination of unknowns with polynomial coefficients.
type SymPoly = BTreeMap<usize, Poly>;

fn sym_add_scaled(acc: &mut SymPoly, f: &Poly, x: &SymPoly) {
    for (k, p) in x {
        let term = f * p;
        if term.is_zero() {
            continue;
        }
        match acc.entry(*k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(term);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &term;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

/// Diagnostics of the degree-0 hom space between the two alternating sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpaceReport {
    pub s: usize,
    pub t: usize,
    pub m: usize,
    pub unknowns: usize,
    pub equations_used: usize,
    /// Dimension of the space of degree-0 bimodule maps.
    pub dimension: usize,
    /// Dimension of the subspace sending `H^<` into `H^<`.
    pub lower_preserving_dimension: usize,
}

impl HomSpaceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s + 1,
            "t": self.t + 1,
            "m": self.m,
            "unknowns": self.unknowns,
            "equations_used": self.equations_used,
            "dimension": self.dimension,
            "lower_preserving_dimension": self.lower_preserving_dimension,
        })
    }
}

/// Alternating word `s, t, s, …` of length `m`.
pub fn alternating(s: usize, t: usize, m: usize) -> Vec<usize> {
    (0..m).map(|i| if i % 2 == 0 { s } else { t }).collect()
}

fn braid_order(c: &CartanData, s: usize, t: usize) -> Result<usize> {
    c.check_index(s)?;
    c.check_index(t)?;
    if s == t {
        return Err(Error::SameReflection(s));
    }
    let m = c.m_order(s, t)?;
    if ![2, 3, 4, 6].contains(&m) {
        return Err(Error::Solver(format!("m_{{s,t}} = {m} is not one of 2, 3, 4, 6")));
    }
    Ok(m)
}

struct System {
    source: Vec<usize>,
    target: Vec<usize>,
    unknowns: usize,
    /// `columns[ε][δ]`: entry `(δ, ε)` as a combination of unknowns.
    columns: Vec<BTreeMap<u32, SymPoly>>,
}

fn build_system(c: &Arc<CartanData>, s: usize, t: usize, m: usize) -> Result<System> {
    let r = c.rank();
    let source = alternating(s, t, m);
    let target = alternating(t, s, m);
    let n = m;
    let last = 1u32 << (n - 1);
    let mut unknowns = 0;
    let mut columns: Vec<BTreeMap<u32, SymPoly>> = vec![BTreeMap::new(); 1 << n];
    for g in 0..last {
        let weight = g.count_ones();
        for delta in 0..=all_ones(n) {
            if delta.count_ones() > weight {
                continue;
            }
            let mut entry = SymPoly::new();
            for mono in Monomial::all_of_degree(r, weight - delta.count_ones()) {
                entry.insert(unknowns, Poly::monomial(r, mono, Rational::from_integer(1.into())));
                unknowns += 1;
            }
            columns[g as usize].insert(delta, entry);
        }
    }
    let x_last = right_mul_table(c, &target, &half_root(r, source[n - 1]))?;
    for g in 0..last {
        let mut image: BTreeMap<u32, SymPoly> = BTreeMap::new();
        for (delta, entry) in &columns[g as usize] {
            for (delta2, f) in &x_last[*delta as usize] {
                sym_add_scaled(image.entry(*delta2).or_default(), f, entry);
            }
        }
        image.retain(|_, e| !e.is_empty());
        columns[(g | last) as usize] = image;
    }
    Ok(System { source, target, unknowns, columns })
}

/// Streams the right-linearity equations, one rational row per monomial,
/// until `visit` asks to stop. Returns the number of rows visited.
fn for_each_equation(
    c: &Arc<CartanData>,
    sys: &System,
    mut visit: impl FnMut(&BTreeMap<usize, Rational>) -> Result<bool>,
) -> Result<usize> {
    let r = c.rank();
    let minus_one = Poly::constant(r, Rational::from_integer((-1).into()));
    let mut used = 0;
    for j in 0..r {
        let alpha = Poly::var(r, j);
        let rs = right_mul_table(c, &sys.source, &alpha)?;
        let rt = right_mul_table(c, &sys.target, &alpha)?;
        for eps in 0..sys.columns.len() {
            // M(b_ε · α_j) − M(b_ε) · α_j, row by row
            let mut residual: BTreeMap<u32, SymPoly> = BTreeMap::new();
            for (eps2, f) in &rs[eps] {
                for (delta, entry) in &sys.columns[*eps2 as usize] {
                    sym_add_scaled(residual.entry(*delta).or_default(), f, entry);
                }
            }
            for (delta, entry) in &sys.columns[eps] {
                for (delta2, f) in &rt[*delta as usize] {
                    sym_add_scaled(residual.entry(*delta2).or_default(), &(&minus_one * f), entry);
                }
            }
            for entry in residual.values() {
                let mut rows: BTreeMap<&Monomial, BTreeMap<usize, Rational>> = BTreeMap::new();
                for (k, p) in entry {
                    for (mono, coeff) in p.terms() {
                        rows.entry(mono).or_default().insert(*k, coeff.clone());
                    }
                }
                for row in rows.values() {
                    used += 1;
                    if visit(row)? {
                        return Ok(used);
                    }
                }
            }
        }
    }
    Ok(used)
}

fn instantiate(c: &Arc<CartanData>, sys: &System, values: &[Rational]) -> Result<Morphism> {
    let r = c.rank();
    let columns = sys
        .columns
        .iter()
        .map(|col| {
            let mut out = BTreeMap::new();
            for (delta, entry) in col {
                let mut p = Poly::zero(r);
                for (k, f) in entry {
                    if !values[*k].is_zero() {
                        p += &f.scale(&values[*k]);
                    }
                }
                if !p.is_zero() {
                    out.insert(*delta, p);
                }
            }
            out
        })
        .collect();
    Morphism::from_columns(c.clone(), sys.source.clone(), sys.target.clone(), 0, columns)
}

fn preserves_lower_terms(f: &Morphism) -> bool {
    let top = all_ones(f.target().len());
    let full = all_ones(f.source().len());
    (0..full).all(|eps| f.entry(top, eps).is_zero())
}

struct Solution {
    vertex: Morphism,
    report: HomSpaceReport,
}

/// Kernel vector of the system, if it is one-dimensional.
///
/// Rows are reduced modulo large primes until the rank reaches `N − 1`; the
/// kernel line is lifted by Chinese remaindering and rational
/// reconstruction, then checked exactly. Since the rank modulo a prime
/// never exceeds the rank over ℚ, a verified nonzero solution certifies
/// that the kernel over ℚ is exactly one-dimensional.
fn modular_solution(c: &Arc<CartanData>, sys: &System) -> Result<Option<(Morphism, usize)>> {
    let n = sys.unknowns;
    // rows are generated once, with the first prime deciding how many suffice
    let mut rows: Vec<BTreeMap<usize, Rational>> = Vec::new();
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut anchor = None;
    for (round, &p) in PRIMES.iter().enumerate() {
        let mut echelon = ModEchelon::new(n, p);
        let reduced = if rows.is_empty() {
            for_each_equation(c, sys, |row| {
                rows.push(row.clone());
                echelon.insert(row)?;
                Ok(echelon.rank() + 1 >= n)
            })
            .map(|_| ())
        } else {
            rows.iter().try_for_each(|row| echelon.insert(row).map(|_| ()))
        };
        match reduced {
            Ok(()) => {}
            Err(Error::Solver(_)) => continue,
            Err(e) => return Err(e),
        }
        if echelon.rank() + 1 != n {
            if round == 0 {
                return Ok(None);
            }
            continue;
        }
        let mut kernel = echelon.kernel().remove(0);
        let Some(i0) = kernel.iter().position(|&v| v != 0) else { return Ok(None) };
        if anchor.is_some_and(|a| a != i0) {
            return Ok(None);
        }
        anchor = Some(i0);
        let inv = inv_mod(kernel[i0], p);
        for v in &mut kernel {
            *v = mul_mod(*v, inv, p);
        }
        residues = if residues.is_empty() {
            kernel.iter().map(|&v| BigInt::from(v)).collect()
        } else {
            residues.iter().zip(&kernel).map(|(a, &b)| crt(a, &modulus, b, p)).collect()
        };
        modulus *= BigInt::from(p);
        let Some(values) = residues
            .iter()
            .map(|a| rational_reconstruct(a, &modulus))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let f = instantiate(c, sys, &values)?;
        if f.is_bimodule_morphism() {
            return Ok(Some((f, rows.len())));
        }
    }
    Ok(None)
}

fn solve(c: &Arc<CartanData>, s: usize, t: usize) -> Result<Solution> {
    let m = braid_order(c, s, t)?;
    let sys = build_system(c, s, t, m)?;
    let mut report = HomSpaceReport {
        s,
        t,
        m,
        unknowns: sys.unknowns,
        equations_used: 0,
        dimension: 1,
        lower_preserving_dimension: 0,
    };
    let f = match modular_solution(c, &sys)? {
        Some((f, used)) => {
            report.equations_used = used;
            f
        }
        None => {
            let mut echelon = Echelon::new(sys.unknowns);
            report.equations_used = for_each_equation(c, &sys, |row| {
                echelon.insert(row);
                Ok(false)
            })?;
            let candidates = echelon.kernel();
            report.dimension = candidates.len();
            let maps = candidates.iter().map(|v| instantiate(c, &sys, v)).collect::<Result<Vec<_>>>()?;
            if maps.len() != 1 {
                report.lower_preserving_dimension = maps.iter().filter(|f| preserves_lower_terms(f)).count();
                return Err(Error::Solver(format!(
                    "degree-0 hom space has dimension {} (expected 1): {}",
                    report.dimension,
                    report.to_json()
                )));
            }
            maps.into_iter().next().expect("one candidate")
        }
    };
    let top = f.entry(all_ones(m), all_ones(m));
    let scale = top
        .as_constant()
        .filter(|q| !q.is_zero())
        .ok_or_else(|| Error::Solver(format!("normal element coefficient is {top}, not a nonzero scalar")))?;
    let vertex = f.left_mul(&Poly::constant(c.rank(), scale.recip()))?;
    report.lower_preserving_dimension = usize::from(preserves_lower_terms(&vertex));
    Ok(Solution { vertex, report })
}

type CacheKey = (String, usize, usize);

fn memory_cache() -> &'static Mutex<HashMap<CacheKey, (Morphism, HomSpaceReport)>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, (Morphism, HomSpaceReport)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn memory_key(c: &CartanData, s: usize, t: usize) -> CacheKey {
    (format!("{:?}|{:?}", c.labels(), c.matrix()), s, t)
}

fn solve_cached(c: &Arc<CartanData>, s: usize, t: usize) -> Result<(Morphism, HomSpaceReport)> {
    let key = memory_key(c, s, t);
    if let Some(hit) = memory_cache().lock().expect("vertex cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let Solution { vertex, report } = solve(c, s, t)?;
    memory_cache()
        .lock()
        .expect("vertex cache poisoned")
        .insert(key, (vertex.clone(), report.clone()));
    Ok((vertex, report))
}

/// The vertex `f_{s,t}` (0-based reflection indices), cached per process.
pub fn solve_vertex(c: &Arc<CartanData>, s: usize, t: usize) -> Result<Morphism> {
    Ok(solve_cached(c, s, t)?.0)
}

/// Dimensions of the degree-0 hom space and its `H^<`-preserving part.
pub fn hom_space_report(c: &Arc<CartanData>, s: usize, t: usize) -> Result<HomSpaceReport> {
    Ok(solve_cached(c, s, t)?.1)
}

/// `JW_{s,t} = f_{t,s} ∘ f_{s,t}`.
pub fn jones_wenzl(c: &Arc<CartanData>, s: usize, t: usize) -> Result<Morphism> {
    compose(&solve_vertex(c, t, s)?, &solve_vertex(c, s, t)?)
}

/// Hex SHA-256 of the canonical `(matrix, s, t)` description.
pub fn cache_key(c: &CartanData, s: usize, t: usize) -> String {
    let canonical = format!("{}|{}|{}", serde_json::to_string(c.matrix()).unwrap_or_default(), s + 1, t + 1);
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// As [`solve_vertex`], reading and writing `DIR/<key>.json`.
pub fn solve_vertex_with_cache_dir(c: &Arc<CartanData>, s: usize, t: usize, dir: &Path) -> Result<Morphism> {
    braid_order(c, s, t)?;
    let path = dir.join(format!("{}.json", cache_key(c, s, t)));
    if let Ok(text) = std::fs::read_to_string(&path) {
        let value: Value = serde_json::from_str(&text)?;
        let f = Morphism::from_json(c.clone(), &value)?;
        let m = f.source().len();
        if f.source() == alternating(s, t, m) && f.target() == alternating(t, s, m) {
            return Ok(f);
        }
    }
    let f = solve_vertex(c, s, t)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(&path, serde_json::to_string(&f.to_json())?)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::parse_bits;

    fn cartan(label: &str) -> Arc<CartanData> {
        Arc::new(CartanData::from_type(label).unwrap())
    }

    #[test]
    fn commuting_vertex_is_the_swap() {
        let c = cartan("A1xA1");
        let f = solve_vertex(&c, 0, 1).unwrap();
        assert_eq!(f.source(), &[0, 1]);
        assert_eq!(f.target(), &[1, 0]);
        // with commuting reflections the vertex is the crossing 1⊗x⊗y ↦ 1⊗y⊗x
        for (src, dst) in [("00", "00"), ("10", "01"), ("01", "10"), ("11", "11")] {
            let (e, _) = parse_bits(src).unwrap();
            let (d, _) = parse_bits(dst).unwrap();
            let col = f.column(e);
            assert_eq!(col.coeffs().len(), 1, "column {src}");
            assert!(col.coeff(d).is_one(), "column {src}");
        }
    }

    #[test]
    fn a2_vertex_is_normalized() {
        let c = cartan("A2");
        let f = solve_vertex(&c, 0, 1).unwrap();
        assert!(f.entry(0b111, 0b111).is_one());
        assert!(f.is_bimodule_morphism());
        assert!(f.degree_check());
        assert!(preserves_lower_terms(&f));
        let report = hom_space_report(&c, 0, 1).unwrap();
        assert_eq!(report.m, 3);
        assert_eq!(report.dimension, 1);
        assert_eq!(report.lower_preserving_dimension, 1);
    }

    #[test]
    fn rejects_bad_pairs() {
        let c = cartan("A2");
        assert!(matches!(solve_vertex(&c, 0, 0), Err(Error::SameReflection(0))));
        assert!(solve_vertex(&c, 0, 2).is_err());
    }

    #[test]
    fn cache_key_depends_on_matrix_and_pair() {
        let a = cartan("A2");
        let b = cartan("B2");
        assert_ne!(cache_key(&a, 0, 1), cache_key(&b, 0, 1));
        assert_ne!(cache_key(&a, 0, 1), cache_key(&a, 1, 0));
        assert_eq!(cache_key(&a, 0, 1).len(), 64);
    }
}
