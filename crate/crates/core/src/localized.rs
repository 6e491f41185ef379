//! Generators acting directly on localizations.
//!
//! An element of `B(s)` is determined by its values at the galleries of `s`.
//! This module transports such value vectors through each generator using
//! fixed-point formulas only, without going through the ε-basis, so that
//! matrix computations can be checked against an unrelated evaluation path.
//!
//! The vertex uses the Atiyah–Bott formula for the push-forward from the
//! Bott–Samelson variety to the Schubert variety of the longest element,
//! followed by the pull-back, which reads off the value at the image point.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bimodule::{all_ones, BSElement, Gallery};
use crate::cartan::{CartanData, WeylElement};
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::poly::{weyl_act, Poly, Rational};
use crate::vertex::alternating;

/// Values of an element at every gallery; `values[γ]` for the bitmask `γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalVector {
    pub seq: Vec<usize>,
    pub values: Vec<Poly>,
}

impl LocalVector {
    pub fn of(m: &BSElement) -> Result<Self> {
        let values = Gallery::all(m.seq())
            .iter()
            .map(|g| Ok(m.localize(g)?.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { seq: m.seq().to_vec(), values })
    }
}

/// One generator placed in a sequence; strands are 1-based, gaps 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalOp {
    DotTop { strand: usize },
    DotBot { position: usize, color: usize },
    Split { strand: usize },
    Merge { strand: usize },
    Vertex { strand: usize },
    JonesWenzl { strand: usize },
    /// Multiplication of the slot at a gap by the simple root `α_root`.
    RootAtGap { position: usize, root: usize },
}

fn insert_bit(bits: u32, pos: usize, bit: u32) -> u32 {
    let low = bits & ((1 << pos) - 1);
    let high = bits >> pos;
    low | bit << pos | high << (pos + 1)
}

fn remove_bit(bits: u32, pos: usize) -> u32 {
    let low = bits & ((1 << pos) - 1);
    let high = bits >> (pos + 1);
    low | high << pos
}

fn prefix(c: &CartanData, seq: &[usize], bits: u32, len: usize) -> Result<WeylElement> {
    let word: Vec<usize> = (0..len).filter(|i| bits >> i & 1 == 1).map(|i| seq[i]).collect();
    c.weyl_from_word(&word)
}

fn root_image(c: &CartanData, w: &WeylElement, u: usize) -> Result<Poly> {
    weyl_act(w, &Poly::var(c.rank(), u))
}

/// Applies `op` to `v`, returning values over the new sequence.
pub fn apply_local(c: &Arc<CartanData>, op: &LocalOp, v: &LocalVector) -> Result<LocalVector> {
    let n = v.seq.len();
    let r = c.rank();
    match *op {
        LocalOp::DotTop { strand } => {
            check_strand(strand, n)?;
            let mut seq = v.seq.clone();
            seq.remove(strand - 1);
            let values = (0..=all_ones(n - 1)).map(|g| v.values[insert_bit(g, strand - 1, 0) as usize].clone()).collect();
            Ok(LocalVector { seq, values })
        }
        LocalOp::Split { strand } => {
            check_strand(strand, n)?;
            let i = strand - 1;
            let mut seq = v.seq.clone();
            seq.insert(i, v.seq[i]);
            let values = (0..=all_ones(n + 1))
                .map(|g| {
                    let merged = remove_bit(g, i) & !(1 << i) | ((g >> i ^ g >> (i + 1)) & 1) << i;
                    v.values[merged as usize].clone()
                })
                .collect();
            Ok(LocalVector { seq, values })
        }
        LocalOp::DotBot { position, color } => {
            if position > n {
                return Err(Error::InvalidPosition { position, len: n });
            }
            c.check_index(color)?;
            let mut seq = v.seq.clone();
            seq.insert(position, color);
            let values = (0..=all_ones(n + 1))
                .map(|g| {
                    if g >> position & 1 == 1 {
                        return Ok(Poly::zero(r));
                    }
                    let w = prefix(c, &seq, g, position)?;
                    Ok(&root_image(c, &w, color)? * &v.values[remove_bit(g, position) as usize])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LocalVector { seq, values })
        }
        LocalOp::Merge { strand } => {
            if strand == 0 || strand + 1 > n {
                return Err(Error::StrandOutOfRange { strand, len: n });
            }
            let i = strand - 1;
            let u = v.seq[i];
            if v.seq[i + 1] != u {
                return Err(Error::AdjacentColorsDiffer { strand });
            }
            let mut seq = v.seq.clone();
            seq.remove(i + 1);
            let values = (0..=all_ones(n - 1))
                .map(|g| {
                    // fiber points (1, g') and (s, s·g') over the merged position
                    let gp = g >> i & 1;
                    let rest = g & !(1 << i);
                    let first = insert_bit(rest, i + 1, gp);
                    let second = insert_bit(rest | 1 << i, i + 1, gp ^ 1);
                    let w = prefix(c, &seq, g, i)?;
                    let denom = root_image(c, &w, u)?;
                    (&v.values[first as usize] - &v.values[second as usize]).div_exact(&denom)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LocalVector { seq, values })
        }
        LocalOp::RootAtGap { position, root } => {
            if position > n {
                return Err(Error::InvalidPosition { position, len: n });
            }
            c.check_index(root)?;
            let values = (0..=all_ones(n))
                .map(|g| {
                    let w = prefix(c, &v.seq, g, position)?;
                    Ok(&root_image(c, &w, root)? * &v.values[g as usize])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LocalVector { seq: v.seq.clone(), values })
        }
        LocalOp::Vertex { strand } => vertex_local(c, v, strand),
        LocalOp::JonesWenzl { strand } => {
            let once = vertex_local(c, v, strand)?;
            vertex_local(c, &once, strand)
        }
    }
}

fn check_strand(strand: usize, n: usize) -> Result<()> {
    if strand == 0 || strand > n {
        return Err(Error::StrandOutOfRange { strand, len: n });
    }
    Ok(())
}

/// A linear form up to a nonzero rational scalar: primitive integer
/// coordinates with positive leading entry.
fn primitive(p: &Poly) -> Result<(Vec<i64>, Rational)> {
    let r = p.rank();
    let coords: Vec<Rational> = (0..r)
        .map(|i| p.coefficient(&crate::poly::Monomial::var(r, i)))
        .collect();
    if p.terms().any(|(m, _)| m.total_degree() != 1) || coords.iter().all(Zero::is_zero) {
        return Err(Error::Solver(format!("{p} is not a nonzero linear form")));
    }
    let lcm = coords.iter().fold(num_bigint::BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<num_bigint::BigInt> = coords.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let mut g = num_bigint::BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    let lead_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if lead_negative {
        g = -g;
    }
    let prim: Vec<i64> = ints
        .iter()
        .map(|x| {
            i64::try_from(x / &g).map_err(|_| Error::Solver("linear form coefficient overflow".into()))
        })
        .collect::<Result<_>>()?;
    let scalar = Rational::new(g, lcm);
    Ok((prim, scalar))
}

/// Output value at one target gallery: `numer · Σ cofactor · v[source] / denom`.
struct KernelRow {
    numer: Poly,
    denom: Poly,
    sources: Vec<(u32, Poly)>,
}

type KernelKey = (String, Vec<usize>, usize);
type KernelCache = Mutex<HashMap<KernelKey, Arc<Vec<Option<KernelRow>>>>>;

fn kernel_cache() -> &'static KernelCache {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Vertex `f_{s,t}` placed on strands `strand .. strand + m − 1`.
fn vertex_local(c: &Arc<CartanData>, v: &LocalVector, strand: usize) -> Result<LocalVector> {
    let n = v.seq.len();
    let i0 = strand.checked_sub(1).ok_or(Error::StrandOutOfRange { strand, len: n })?;
    if i0 + 1 >= n {
        return Err(Error::StrandOutOfRange { strand, len: n });
    }
    let (s, t) = (v.seq[i0], v.seq[i0 + 1]);
    if s == t {
        return Err(Error::SameReflection(s));
    }
    let m = c.m_order(s, t)?;
    if i0 + m > n || v.seq[i0..i0 + m] != alternating(s, t, m)[..] {
        return Err(Error::BoundaryMismatch(format!("no alternating run of length {m} at strand {strand}")));
    }
    let mut seq = v.seq.clone();
    seq[i0..i0 + m].copy_from_slice(&alternating(t, s, m));

    let key = (format!("{:?}", c.matrix()), v.seq.clone(), i0);
    let cached = kernel_cache().lock().expect("kernel cache poisoned").get(&key).cloned();
    let kernel = match cached {
        Some(k) => k,
        None => {
            let k = Arc::new(vertex_kernel(c, &seq, i0, s, t, m)?);
            kernel_cache().lock().expect("kernel cache poisoned").insert(key, k.clone());
            k
        }
    };
    let r = c.rank();
    let values = kernel
        .iter()
        .map(|row| {
            let Some(row) = row else {
                return Ok(Poly::zero(r));
            };
            let mut total = Poly::zero(r);
            for (full, cofactor) in &row.sources {
                let value = &v.values[*full as usize];
                if !value.is_zero() {
                    total += &(cofactor * value);
                }
            }
            if total.is_zero() {
                return Ok(total);
            }
            (&row.numer * &total).div_exact(&row.denom)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalVector { seq, values })
}

/// Input-independent data of the vertex at every target gallery of `seq`.
fn vertex_kernel(c: &Arc<CartanData>, seq: &[usize], i0: usize, s: usize, t: usize, m: usize) -> Result<Vec<Option<KernelRow>>> {
    let r = c.rank();
    let n = seq.len();
    let src_word = alternating(s, t, m);
    let tgt_word = alternating(t, s, m);

    // local data: Euler classes at each source gallery and each dihedral element
    let sub_mask = all_ones(m);
    let mut by_product: BTreeMap<Vec<Vec<i64>>, Vec<(u32, Vec<Poly>)>> = BTreeMap::new();
    for g in 0..=sub_mask {
        let mut w = WeylElement::identity(r);
        let mut weights = Vec::with_capacity(m);
        for (k, &u) in src_word.iter().enumerate() {
            if g >> k & 1 == 1 {
                w = w.compose(&c.reflection(u)?)?;
            }
            weights.push(root_image(c, &w, u)?);
        }
        by_product.entry(w.matrix().to_vec()).or_default().push((g, weights));
    }
    let mut positive_roots = Vec::with_capacity(m);
    let mut w = WeylElement::identity(r);
    for &u in &src_word {
        positive_roots.push(root_image(c, &w, u)?);
        w = w.compose(&c.reflection(u)?)?;
    }

    (0..=all_ones(n))
        .map(|g| {
            let outer_prefix = prefix(c, seq, g, i0)?;
            let inner = g >> i0 & sub_mask;
            let x = prefix(c, &tgt_word, inner, m)?;
            let Some(sources) = by_product.get(x.matrix()) else {
                return Ok(None);
            };
            let twist = |p: &Poly| weyl_act(&outer_prefix, p);
            let mut numer = Poly::one(r);
            for beta in &positive_roots {
                numer = &numer * &twist(&weyl_act(&x, beta)?)?;
            }
            // common denominator of the Euler classes e_γ
            let mut factored = Vec::with_capacity(sources.len());
            let mut max_mult: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
            for (_, weights) in sources {
                let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
                let mut scalar = Rational::one();
                for wt in weights {
                    let (prim, k) = primitive(&twist(wt)?)?;
                    scalar *= k;
                    *counts.entry(prim).or_default() += 1;
                }
                for (l, k) in &counts {
                    let e = max_mult.entry(l.clone()).or_default();
                    *e = (*e).max(*k);
                }
                factored.push((counts, scalar));
            }
            let linear = |l: &[i64]| Poly::linear(l);
            let mut denom = Poly::one(r);
            for (l, k) in &max_mult {
                denom = &denom * &linear(l).pow(*k as u32);
            }
            let mut terms = Vec::with_capacity(sources.len());
            for ((gal, _), (counts, scalar)) in sources.iter().zip(&factored) {
                let mut cofactor = Poly::constant(r, scalar.recip());
                for (l, k) in &max_mult {
                    let have = counts.get(l).copied().unwrap_or(0);
                    cofactor = &cofactor * &linear(l).pow((*k - have) as u32);
                }
                let full = g & !(sub_mask << i0) | gal << i0;
                terms.push((full, cofactor));
            }
            Ok(Some(KernelRow { numer, denom, sources: terms }))
        })
        .collect()
}

/// Applies a list of operations bottom to top.
pub fn apply_local_ops(c: &Arc<CartanData>, ops: &[LocalOp], v: &LocalVector) -> Result<LocalVector> {
    let mut current = v.clone();
    for op in ops {
        current = apply_local(c, op, &current)?;
    }
    Ok(current)
}

/// True iff `m` and the local operations agree on every basis element of the source.
pub fn agrees_with_local(m: &Morphism, ops: &[LocalOp]) -> Result<bool> {
    let c = m.cartan();
    for bits in 0..=all_ones(m.source().len()) {
        let b = BSElement::basis(c.clone(), m.source().to_vec(), bits)?;
        let direct = LocalVector::of(&m.apply(&b)?)?;
        let via = apply_local_ops(c, ops, &LocalVector::of(&b)?)?;
        if direct != via {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff two operation lists agree on the localization of every basis element over `seq`.
pub fn local_ops_agree(c: &Arc<CartanData>, seq: &[usize], lhs: &[LocalOp], rhs: &[LocalOp]) -> Result<bool> {
    for bits in 0..=all_ones(seq.len()) {
        let b = LocalVector::of(&BSElement::basis(c.clone(), seq.to_vec(), bits)?)?;
        if apply_local_ops(c, lhs, &b)? != apply_local_ops(c, rhs, &b)? {
            return Ok(false);
        }
    }
    Ok(true)
}
