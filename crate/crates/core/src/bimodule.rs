//! Bott–Samelson bimodules `R ⊗_{R^{s_1}} R ⊗ … ⊗_{R^{s_n}} R` in the
//! ε-basis, standard bimodules `R_w`, and localization at galleries.
//!
//! An element is stored as a map from bitstrings `ε` to left coefficients:
//! `Σ_ε c_ε · (1 ⊗ x_{s_1}^{ε_1} ⊗ … ⊗ x_{s_n}^{ε_n})`. Bit `i` of the mask
//! is `ε_{i+1}`; the printed bitstring lists `ε_1` first.
//!
//! Every operation that produces an element goes through
//! [`element_from_tensor`], which rewrites a pure tensor right to left using
//! `f = P_s(f) + ∂_s(f)·x_s` and moves the invariant part across the tensor sign.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cartan::{CartanData, WeylElement};
use crate::error::{Error, Result};
use crate::linalg::{poly_rank_and_det, rational_rank};
use crate::poly::{decompose, half_root, int, weyl_act, Poly, Rational};

/// Sequences longer than this are rejected by the `u32` bit encoding.
pub const MAX_SEQ_LEN: usize = 24;

/// Default bound on the sequence length for localization matrices.
pub const DEFAULT_LOCALIZATION_BOUND: usize = 6;

pub fn bits_to_string(bits: u32, len: usize) -> String {
    (0..len).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Result<(u32, usize)> {
    if s.len() > MAX_SEQ_LEN {
        return Err(Error::SizeBoundExceeded { len: s.len(), bound: MAX_SEQ_LEN });
    }
    let mut bits = 0;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => bits |= 1 << i,
            _ => return Err(Error::Parse(format!("bitstring `{s}` may only contain 0 and 1"))),
        }
    }
    Ok((bits, s.chars().count()))
}

pub fn all_ones(len: usize) -> u32 {
    if len == 0 {
        0
    } else {
        u32::MAX >> (32 - len)
    }
}

fn check_seq(c: &CartanData, seq: &[usize]) -> Result<()> {
    if seq.len() > MAX_SEQ_LEN {
        return Err(Error::SizeBoundExceeded { len: seq.len(), bound: MAX_SEQ_LEN });
    }
    c.check_word(seq)
}

/// Rewrites `slots[0] ⊗ … ⊗ slots[n]` into ε-basis coefficients.
pub(crate) fn normalize_slots(c: &CartanData, seq: &[usize], slots: &[Poly]) -> Result<BTreeMap<u32, Poly>> {
    let n = seq.len();
    if slots.len() != n + 1 {
        return Err(Error::LengthMismatch { expected: n + 1, got: slots.len() });
    }
    let mut states: Vec<(u32, Poly)> = vec![(0, slots[n].clone())];
    for i in (0..n).rev() {
        let mut next = Vec::with_capacity(2 * states.len());
        for (bits, content) in states {
            if content.is_zero() {
                continue;
            }
            let (inv, dem) = decompose(c, seq[i], &content)?;
            if !inv.is_zero() {
                next.push((bits, &slots[i] * &inv));
            }
            if !dem.is_zero() {
                next.push((bits | 1 << i, &slots[i] * &dem));
            }
        }
        states = next;
    }
    if n == 0 {
        states[0].1 = slots[0].clone();
    }
    let mut out = BTreeMap::new();
    for (bits, coeff) in states {
        if !coeff.is_zero() {
            out.insert(bits, coeff);
        }
    }
    Ok(out)
}

/// Element of the Bott–Samelson bimodule over a sequence of simple reflections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSElement {
    cartan: Arc<CartanData>,
    seq: Vec<usize>,
    coeffs: BTreeMap<u32, Poly>,
}

impl BSElement {
    pub fn zero(cartan: Arc<CartanData>, seq: Vec<usize>) -> Result<Self> {
        check_seq(&cartan, &seq)?;
        Ok(Self { cartan, seq, coeffs: BTreeMap::new() })
    }

    /// The unit `1 ∈ B(∅) = R`.
    pub fn unit(cartan: Arc<CartanData>) -> Self {
        let r = cartan.rank();
        Self { cartan, seq: Vec::new(), coeffs: BTreeMap::from([(0, Poly::one(r))]) }
    }

    /// Basis element `b_ε`.
    pub fn basis(cartan: Arc<CartanData>, seq: Vec<usize>, bits: u32) -> Result<Self> {
        check_seq(&cartan, &seq)?;
        if bits & !all_ones(seq.len()) != 0 {
            return Err(Error::LengthMismatch { expected: seq.len(), got: 32 - bits.leading_zeros() as usize });
        }
        let r = cartan.rank();
        Ok(Self { cartan, seq, coeffs: BTreeMap::from([(bits, Poly::one(r))]) })
    }

    /// Builds an element from explicit coefficients, dropping zeros.
    pub fn from_coeffs(cartan: Arc<CartanData>, seq: Vec<usize>, coeffs: BTreeMap<u32, Poly>) -> Result<Self> {
        check_seq(&cartan, &seq)?;
        let mask = !all_ones(seq.len());
        for (bits, p) in &coeffs {
            if bits & mask != 0 {
                return Err(Error::LengthMismatch { expected: seq.len(), got: 32 - bits.leading_zeros() as usize });
            }
            if p.rank() != cartan.rank() {
                return Err(Error::RankMismatch { left: cartan.rank(), right: p.rank() });
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(Self { cartan, seq, coeffs })
    }

    pub(crate) fn from_parts_unchecked(cartan: Arc<CartanData>, seq: Vec<usize>, coeffs: BTreeMap<u32, Poly>) -> Self {
        Self { cartan, seq, coeffs }
    }

    pub fn cartan(&self) -> &Arc<CartanData> {
        &self.cartan
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Poly> {
        &self.coeffs
    }

    pub(crate) fn into_coeffs(self) -> BTreeMap<u32, Poly> {
        self.coeffs
    }

    pub fn coeff(&self, bits: u32) -> Poly {
        self.coeffs.get(&bits).cloned().unwrap_or_else(|| Poly::zero(self.rank()))
    }

    fn check_same_module(&self, other: &BSElement) -> Result<()> {
        if self.cartan != other.cartan {
            return Err(Error::RankMismatch { left: self.rank(), right: other.rank() });
        }
        if self.seq != other.seq {
            return Err(Error::SequenceMismatch(format!("{:?} vs {:?}", self.seq, other.seq)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &BSElement) -> Result<BSElement> {
        self.check_same_module(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &BSElement) -> Result<BSElement> {
        self.check_same_module(other)?;
        Ok(self - other)
    }

    pub fn add_scaled(&mut self, f: &Poly, other: &BSElement) {
        for (bits, p) in &other.coeffs {
            let term = f * p;
            add_coeff(&mut self.coeffs, *bits, &term);
        }
    }

    pub fn scale(&self, q: &Rational) -> BSElement {
        self.map_coeffs(|p| p.scale(q))
    }

    fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> BSElement {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(b, p)| (*b, f(p)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        BSElement { cartan: self.cartan.clone(), seq: self.seq.clone(), coeffs }
    }

    /// Left action: multiplies every coefficient by `f`.
    pub fn left_mul(&self, f: &Poly) -> Result<BSElement> {
        if f.rank() != self.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: f.rank() });
        }
        Ok(self.map_coeffs(|p| f * p))
    }

    /// Right action: each basis tensor `(c_ε, x^{ε_1}, …, x^{ε_n}·f)` is
    /// renormalized.
    pub fn right_mul(&self, f: &Poly) -> Result<BSElement> {
        if f.rank() != self.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: f.rank() });
        }
        let r = self.rank();
        let n = self.len();
        let mut out = BTreeMap::new();
        for (bits, coeff) in &self.coeffs {
            let mut slots = basis_slots(r, &self.seq, *bits);
            slots[0] = coeff.clone();
            slots[n] = &slots[n] * f;
            for (b, p) in normalize_slots(&self.cartan, &self.seq, &slots)? {
                add_coeff(&mut out, b, &p);
            }
        }
        Ok(BSElement { cartan: self.cartan.clone(), seq: self.seq.clone(), coeffs: out })
    }

    /// Concatenation `B(s) ⊗_R B(t) → B(st)`: the junction slots multiply.
    pub fn concat(&self, other: &BSElement) -> Result<BSElement> {
        if self.cartan != other.cartan {
            return Err(Error::RankMismatch { left: self.rank(), right: other.rank() });
        }
        let shift = self.len();
        let mut seq = self.seq.clone();
        seq.extend_from_slice(&other.seq);
        check_seq(&self.cartan, &seq)?;
        let mut out = BTreeMap::new();
        for (delta, coeff) in &other.coeffs {
            let moved = self.right_mul(coeff)?;
            for (eps, p) in moved.coeffs {
                add_coeff(&mut out, eps | delta << shift, &p);
            }
        }
        Ok(BSElement { cartan: self.cartan.clone(), seq, coeffs: out })
    }

    /// True iff the coefficient of the normal element vanishes.
    pub fn in_lower_terms(&self) -> bool {
        !self.coeffs.contains_key(&all_ones(self.len()))
    }

    /// True iff every `c_ε` is homogeneous of degree `d − 2|ε|` (or zero).
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.coeffs
            .iter()
            .all(|(bits, p)| p.is_homogeneous_of(d - 2 * i64::from(bits.count_ones())))
    }

    /// Homogeneous degree, if any.
    pub fn degree(&self) -> Option<i64> {
        let (bits, p) = self.coeffs.iter().next()?;
        let lead = p.terms().next()?.0.total_degree();
        let d = 2 * i64::from(lead) + 2 * i64::from(bits.count_ones());
        self.is_homogeneous_of(d).then_some(d)
    }

    /// Value at the fixed point `γ`.
    pub fn localize(&self, gallery: &Gallery) -> Result<StandardElement> {
        if gallery.seq != self.seq {
            return Err(Error::SequenceMismatch(format!(
                "gallery over {:?}, element over {:?}",
                gallery.seq, self.seq
            )));
        }
        let factors = gallery_factors(&self.cartan, &self.seq, gallery.bits)?;
        let mut value = Poly::zero(self.rank());
        for (bits, coeff) in &self.coeffs {
            value += &(coeff * &basis_localization(&factors, *bits, self.rank()));
        }
        Ok(StandardElement { cartan: self.cartan.clone(), twist: gallery.product(&self.cartan)?, value })
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(b, p)| (bits_to_string(*b, self.len()), Value::String(p.to_string())))
            .collect();
        json!({
            "seq": self.seq.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "coeffs": coeffs,
        })
    }

    /// Reads `{"seq": [1, 2, 1], "coeffs": {"101": "<poly>", …}}` (1-based indices).
    pub fn from_json(cartan: Arc<CartanData>, value: &Value) -> Result<Self> {
        let seq = parse_seq_json(&cartan, value.get("seq").ok_or_else(|| Error::Schema("missing `seq`".into()))?)?;
        let mut coeffs = BTreeMap::new();
        if let Some(obj) = value.get("coeffs") {
            let obj = obj.as_object().ok_or_else(|| Error::Schema("`coeffs` must be an object".into()))?;
            for (key, v) in obj {
                let (bits, len) = parse_bits(key)?;
                if len != seq.len() {
                    return Err(Error::LengthMismatch { expected: seq.len(), got: len });
                }
                let p = Poly::from_json(v, cartan.rank())?;
                add_coeff(&mut coeffs, bits, &p);
            }
        }
        Self::from_coeffs(cartan, seq, coeffs)
    }
}

/// Parses a JSON list of 1-based reflection indices.
pub fn parse_seq_json(cartan: &CartanData, value: &Value) -> Result<Vec<usize>> {
    let items = value.as_array().ok_or_else(|| Error::Schema("`seq` must be a list".into()))?;
    let seq: Vec<usize> = items
        .iter()
        .map(|v| {
            v.as_u64()
                .filter(|&i| i >= 1)
                .map(|i| i as usize - 1)
                .ok_or_else(|| Error::Schema(format!("bad reflection index {v}")))
        })
        .collect::<Result<_>>()?;
    check_seq(cartan, &seq)?;
    Ok(seq)
}

pub(crate) fn add_coeff(map: &mut BTreeMap<u32, Poly>, bits: u32, p: &Poly) {
    if p.is_zero() {
        return;
    }
    match map.entry(bits) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(p.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += p;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Slots `(1, x_{s_1}^{ε_1}, …, x_{s_n}^{ε_n})` of a basis tensor.
pub(crate) fn basis_slots(rank: usize, seq: &[usize], bits: u32) -> Vec<Poly> {
    let mut slots = Vec::with_capacity(seq.len() + 1);
    slots.push(Poly::one(rank));
    for (i, &s) in seq.iter().enumerate() {
        slots.push(if bits >> i & 1 == 1 { half_root(rank, s) } else { Poly::one(rank) });
    }
    slots
}

/// `γ_1⋯γ_i(x_{s_i})` for every position `i`.
fn gallery_factors(c: &CartanData, seq: &[usize], bits: u32) -> Result<Vec<Poly>> {
    let mut prefix = WeylElement::identity(c.rank());
    let mut out = Vec::with_capacity(seq.len());
    for (i, &s) in seq.iter().enumerate() {
        if bits >> i & 1 == 1 {
            prefix = prefix.compose(&c.reflection(s)?)?;
        }
        out.push(weyl_act(&prefix, &half_root(c.rank(), s))?);
    }
    Ok(out)
}

fn basis_localization(factors: &[Poly], bits: u32, rank: usize) -> Poly {
    let mut v = Poly::one(rank);
    for (i, f) in factors.iter().enumerate() {
        if bits >> i & 1 == 1 {
            v = &v * f;
        }
    }
    v
}

impl Add for &BSElement {
    type Output = BSElement;
    fn add(self, rhs: &BSElement) -> BSElement {
        let mut out = self.clone();
        for (b, p) in &rhs.coeffs {
            add_coeff(&mut out.coeffs, *b, p);
        }
        out
    }
}

impl Sub for &BSElement {
    type Output = BSElement;
    fn sub(self, rhs: &BSElement) -> BSElement {
        self + &(-rhs)
    }
}

impl Neg for &BSElement {
    type Output = BSElement;
    fn neg(self) -> BSElement {
        self.map_coeffs(|p| -p)
    }
}

impl fmt::Display for BSElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(b, p)| format!("({p})·b_{}", bits_to_string(*b, self.len())))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// --- free-function surface ----------------------------------------------------

/// Normalizes the pure tensor `a_1 ⊗ … ⊗ a_{n+1}` into the ε-basis.
pub fn element_from_tensor(cartan: &Arc<CartanData>, seq: &[usize], tensor: &[Poly]) -> Result<BSElement> {
    check_seq(cartan, seq)?;
    if let Some(p) = tensor.iter().find(|p| p.rank() != cartan.rank()) {
        return Err(Error::RankMismatch { left: cartan.rank(), right: p.rank() });
    }
    let coeffs = normalize_slots(cartan, seq, tensor)?;
    Ok(BSElement { cartan: cartan.clone(), seq: seq.to_vec(), coeffs })
}

pub fn left_mul(f: &Poly, m: &BSElement) -> Result<BSElement> {
    m.left_mul(f)
}

pub fn right_mul(m: &BSElement, f: &Poly) -> Result<BSElement> {
    m.right_mul(f)
}

pub fn concat(a: &BSElement, b: &BSElement) -> Result<BSElement> {
    a.concat(b)
}

/// `1 ⊗ x_{s_1} ⊗ … ⊗ x_{s_n}`.
pub fn normal_element(cartan: &Arc<CartanData>, seq: &[usize]) -> Result<BSElement> {
    BSElement::basis(cartan.clone(), seq.to_vec(), all_ones(seq.len()))
}

/// `c_{s_1} ⋯ c_{s_n}` with `c_s = x_s ⊗ 1 + 1 ⊗ x_s`.
pub fn c_product(cartan: &Arc<CartanData>, seq: &[usize]) -> Result<BSElement> {
    check_seq(cartan, seq)?;
    let r = cartan.rank();
    let mut acc = BSElement::unit(cartan.clone());
    for &s in seq {
        let cs = BSElement {
            cartan: cartan.clone(),
            seq: vec![s],
            coeffs: BTreeMap::from([(0, half_root(r, s)), (1, Poly::one(r))]),
        };
        acc = acc.concat(&cs)?;
    }
    Ok(acc)
}

pub fn in_lower_terms(m: &BSElement) -> bool {
    m.in_lower_terms()
}

/// Generating function of basis degrees, as a Laurent polynomial in `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRank(pub BTreeMap<i32, u64>);

impl GradedRank {
    pub fn coefficient(&self, exponent: i32) -> u64 {
        self.0.get(&exponent).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }
}

impl fmt::Display for GradedRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&e, &c)| {
                let coeff = if c == 1 && e != 0 { String::new() } else { c.to_string() };
                match e {
                    0 => coeff,
                    1 => format!("{coeff}v"),
                    _ => format!("{coeff}v^{e}"),
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

pub fn graded_rank(cartan: &CartanData, seq: &[usize]) -> Result<GradedRank> {
    check_seq(cartan, seq)?;
    let mut out = BTreeMap::new();
    for bits in 0..=all_ones(seq.len()) {
        *out.entry(2 * bits.count_ones() as i32).or_insert(0) += 1;
    }
    Ok(GradedRank(out))
}

/// A choice `γ_i ∈ {1, s_i}` per position; bit `i` set means `γ_{i+1} = s_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gallery {
    pub seq: Vec<usize>,
    pub bits: u32,
}

impl Gallery {
    pub fn new(seq: Vec<usize>, bits: u32) -> Result<Self> {
        if seq.len() > MAX_SEQ_LEN || bits & !all_ones(seq.len()) != 0 {
            return Err(Error::LengthMismatch { expected: seq.len(), got: 32 - bits.leading_zeros() as usize });
        }
        Ok(Self { seq, bits })
    }

    pub fn parse(seq: Vec<usize>, text: &str) -> Result<Self> {
        let (bits, len) = parse_bits(text)?;
        if len != seq.len() {
            return Err(Error::LengthMismatch { expected: seq.len(), got: len });
        }
        Self::new(seq, bits)
    }

    pub fn all(seq: &[usize]) -> Vec<Gallery> {
        (0..=all_ones(seq.len())).map(|bits| Gallery { seq: seq.to_vec(), bits }).collect()
    }

    /// `γ_1 ⋯ γ_n`.
    pub fn product(&self, c: &CartanData) -> Result<WeylElement> {
        let word: Vec<usize> = self
            .seq
            .iter()
            .enumerate()
            .filter(|(i, _)| self.bits >> i & 1 == 1)
            .map(|(_, &s)| s)
            .collect();
        c.weyl_from_word(&word)
    }
}

impl fmt::Display for Gallery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", bits_to_string(self.bits, self.seq.len()))
    }
}

pub fn localize(m: &BSElement, gallery: &Gallery) -> Result<StandardElement> {
    m.localize(gallery)
}

/// Values of every basis element at every fixed point.
#[derive(Debug, Clone)]
pub struct LocalizationMatrix {
    pub seq: Vec<usize>,
    /// `entries[γ][ε] = localize(b_ε, γ).value`.
    pub entries: Vec<Vec<Poly>>,
    pub full_rank: bool,
    /// Determinant, computed for sequences of length at most 4.
    pub determinant: Option<Poly>,
}

pub fn localization_matrix(cartan: &CartanData, seq: &[usize], bound: usize) -> Result<LocalizationMatrix> {
    check_seq(cartan, seq)?;
    if seq.len() > bound {
        return Err(Error::SizeBoundExceeded { len: seq.len(), bound });
    }
    let r = cartan.rank();
    let size = 1usize << seq.len();
    let mut entries = Vec::with_capacity(size);
    for g in 0..size as u32 {
        let factors = gallery_factors(cartan, seq, g)?;
        entries.push((0..size as u32).map(|e| basis_localization(&factors, e, r)).collect::<Vec<_>>());
    }
    let determinant = if seq.len() <= 4 { poly_rank_and_det(entries.clone(), r)?.1 } else { None };
    let full_rank = match &determinant {
        Some(d) => !d.is_zero(),
        None => full_rank_over_fraction_field(&entries, r)?,
    };
    Ok(LocalizationMatrix { seq: seq.to_vec(), entries, full_rank, determinant })
}

/// Certifies full rank by evaluation at a few integer points, falling back to
/// exact fraction-free elimination.
fn full_rank_over_fraction_field(entries: &[Vec<Poly>], rank: usize) -> Result<bool> {
    let size = entries.len();
    for k in 0..4i64 {
        let point: Vec<Rational> = (0..rank).map(|i| int(3 + 7 * k + 11 * i as i64 * (k + 1))).collect();
        let evaluated: Vec<Vec<Rational>> =
            entries.iter().map(|row| row.iter().map(|p| p.eval(&point)).collect()).collect();
        if rational_rank(evaluated) == size {
            return Ok(true);
        }
    }
    Ok(poly_rank_and_det(entries.to_vec(), rank)?.0 == size)
}

/// Element of `R_w`: left action untwisted, right action `r·f = r·w(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardElement {
    pub cartan: Arc<CartanData>,
    pub twist: WeylElement,
    pub value: Poly,
}

impl StandardElement {
    pub fn new(cartan: Arc<CartanData>, twist: WeylElement, value: Poly) -> Result<Self> {
        if twist.rank() != cartan.rank() || value.rank() != cartan.rank() {
            return Err(Error::RankMismatch { left: cartan.rank(), right: value.rank() });
        }
        Ok(Self { cartan, twist, value })
    }

    pub fn left_mul(&self, f: &Poly) -> Result<StandardElement> {
        Ok(StandardElement { value: self.value.try_mul(f)?, ..self.clone() })
    }

    pub fn right_mul(&self, f: &Poly) -> Result<StandardElement> {
        Ok(StandardElement { value: self.value.try_mul(&weyl_act(&self.twist, f)?)?, ..self.clone() })
    }

    pub fn to_json(&self) -> Value {
        json!({ "twist": self.twist.matrix(), "value": self.value.to_string() })
    }
}

/// `R_w ⊗_R R_{w'} ≅ R_{ww'}`: `f ⊗ g ↦ f·w(g)`.
pub fn standard_tensor(a: &StandardElement, b: &StandardElement) -> Result<StandardElement> {
    if a.cartan != b.cartan {
        return Err(Error::RankMismatch { left: a.cartan.rank(), right: b.cartan.rank() });
    }
    Ok(StandardElement {
        cartan: a.cartan.clone(),
        twist: a.twist.compose(&b.twist)?,
        value: &a.value * &weyl_act(&a.twist, &b.value)?,
    })
}
