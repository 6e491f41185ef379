//! Exact linear algebra: rank and determinant of polynomial matrices, and a
//! sparse fraction-free kernel solver over ℚ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational};

/// Rank of a rational matrix by plain Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot;
            for c in col..ncols {
                let delta = &factor * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free (Bareiss) elimination over the polynomial ring.
///
/// Returns the rank over the fraction field and, for square matrices, the
/// determinant.
pub fn poly_rank_and_det(mut rows: Vec<Vec<Poly>>, rank_of_ring: usize) -> Result<(usize, Option<Poly>)> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = Poly::one(rank_of_ring);
    let mut rank = 0;
    let mut sign_flips = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else { continue };
        if p != rank {
            rows.swap(rank, p);
            sign_flips += 1;
        }
        let pivot = rows[rank][col].clone();
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let num = &(&pivot * &rows[r][c]) - &(&rows[r][col] * &rows[rank][c]);
                rows[r][c] = num.div_exact(&prev)?;
            }
            rows[r][col] = Poly::zero(rank_of_ring);
        }
        prev = pivot;
        rank += 1;
    }
    let det = (nrows == ncols).then(|| {
        if rank < nrows {
            Poly::zero(rank_of_ring)
        } else if sign_flips % 2 == 1 {
            -prev.clone()
        } else {
            prev.clone()
        }
    });
    Ok((rank, det))
}

/// Sparse row of integer coefficients, sorted by column.
type IntRow = Vec<(usize, BigInt)>;

/// Row echelon form built incrementally by fraction-free elimination.
///
/// Each incoming row is reduced against the pivot rows in order of their
/// leading column; the first surviving nonzero column becomes its pivot.
#[derive(Debug, Default)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Adds a rational row; returns true if it raised the rank.
    pub fn insert(&mut self, row: &BTreeMap<usize, Rational>) -> bool {
        let mut row = to_integer_row(row);
        loop {
            let Some(&(lead, _)) = row.first() else { return false };
            match self.pivots.get(&lead) {
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(pivot) => {
                    row = eliminate(&row, pivot);
                }
            }
        }
    }

    /// Basis of the kernel, one vector per free column (ascending).
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.ncols];
                x[f] = Rational::one();
                for (&c, row) in self.pivots.iter().rev() {
                    let mut acc = Rational::zero();
                    for (k, a) in &row[1..] {
                        if !x[*k].is_zero() {
                            acc += &x[*k] * BigRational::from_integer(a.clone());
                        }
                    }
                    x[c] = -acc / BigRational::from_integer(row[0].1.clone());
                }
                x
            })
            .collect()
    }
}

fn to_integer_row(row: &BTreeMap<usize, Rational>) -> IntRow {
    let lcm = row.values().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut out: IntRow = row
        .iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|(&c, q)| (c, q.numer() * (&lcm / q.denom())))
        .collect();
    remove_content(&mut out);
    out
}

fn remove_content(row: &mut IntRow) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, a) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(a);
    }
    let negate = first.1.is_negative();
    if !g.is_one() || negate {
        let g = if negate { -g } else { g };
        for (_, a) in row.iter_mut() {
            *a = &*a / &g;
        }
    }
}

/// `pivot[lead]·row − row[lead]·pivot`, with content removed.
fn eliminate(row: &IntRow, pivot: &IntRow) -> IntRow {
    let a = &pivot[0].1;
    let b = &row[0].1;
    let g = a.gcd(b);
    let (a, b) = (a / &g, b / &g);
    let mut out = IntRow::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0);
        let cj = pivot.get(j).map(|e| e.0);
        let (col, val) = match (ci, cj) {
            (Some(x), Some(y)) if x == y => {
                let v = &a * &row[i].1 - &b * &pivot[j].1;
                i += 1;
                j += 1;
                (x, v)
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                (x, &a * &row[i - 1].1)
            }
            (Some(x), None) => {
                i += 1;
                (x, &a * &row[i - 1].1)
            }
            (_, Some(y)) => {
                j += 1;
                (y, -(&b * &pivot[j - 1].1))
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    remove_content(&mut out);
    out
}

/// Primes just below `2^62`, used for modular elimination.
pub const PRIMES: [u64; 8] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
];

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(p)) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Image of `q` in `ℤ/p`, or `None` if its denominator vanishes there.
pub fn reduce_mod(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let to_u64 = |x: &BigInt| -> u64 {
        let r = x.mod_floor(&pb);
        r.iter_u64_digits().next().unwrap_or(0)
    };
    let den = to_u64(q.denom());
    if den == 0 {
        return None;
    }
    Some(mul_mod(to_u64(q.numer()), inv_mod(den, p), p))
}

/// Sparse row echelon form over `ℤ/p`, pivot rows scaled to a leading 1.
#[derive(Debug)]
pub struct ModEchelon {
    p: u64,
    ncols: usize,
    pivots: BTreeMap<usize, Vec<(usize, u64)>>,
}

impl ModEchelon {
    pub fn new(ncols: usize, p: u64) -> Self {
        Self { p, ncols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Adds a rational row. Errors if a denominator is divisible by `p`.
    pub fn insert(&mut self, row: &BTreeMap<usize, Rational>) -> Result<bool> {
        let p = self.p;
        let mut current: Vec<(usize, u64)> = Vec::with_capacity(row.len());
        for (&c, q) in row {
            let v = reduce_mod(q, p).ok_or_else(|| Error::Solver(format!("denominator divisible by {p}")))?;
            if v != 0 {
                current.push((c, v));
            }
        }
        loop {
            let Some(&(lead, a)) = current.first() else { return Ok(false) };
            match self.pivots.get(&lead) {
                None => {
                    let inv = inv_mod(a, p);
                    for e in &mut current {
                        e.1 = mul_mod(e.1, inv, p);
                    }
                    self.pivots.insert(lead, current);
                    return Ok(true);
                }
                Some(pivot) => current = axpy_mod(&current, p - a, pivot, p),
            }
        }
    }

    /// Basis of the kernel, one vector per free column (ascending).
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u64; self.ncols];
                x[f] = 1;
                for (&c, row) in self.pivots.iter().rev() {
                    let mut acc = 0u64;
                    for &(k, a) in &row[1..] {
                        if x[k] != 0 {
                            acc = (acc + mul_mod(a, x[k], p)) % p;
                        }
                    }
                    x[c] = (p - acc) % p;
                }
                x
            })
            .collect()
    }
}

/// `row + k·pivot` over `ℤ/p`, merging sorted sparse rows.
fn axpy_mod(row: &[(usize, u64)], k: u64, pivot: &[(usize, u64)], p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, val) = if ci == cj {
            i += 1;
            j += 1;
            (ci, (row[i - 1].1 + mul_mod(k, pivot[j - 1].1, p)) % p)
        } else if ci < cj {
            i += 1;
            (ci, row[i - 1].1)
        } else {
            j += 1;
            (cj, mul_mod(k, pivot[j - 1].1, p))
        };
        if val != 0 {
            out.push((col, val));
        }
    }
    out
}

/// Chinese remaindering of residues `a mod m` and `b mod p` into `mod m·p`.
pub fn crt(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let m_mod_p = reduce_mod(&BigRational::from_integer(m.clone()), p).unwrap_or(0);
    let a_mod_p = reduce_mod(&BigRational::from_integer(a.clone()), p).unwrap_or(0);
    let diff = (b + p - a_mod_p) % p;
    let k = mul_mod(diff, inv_mod(m_mod_p, p), p);
    (a + m * BigInt::from(k)).mod_floor(&(m * &pb))
}

/// Smallest fraction `n/d` with `|n|, d ≤ sqrt(m/2)` congruent to `a` mod `m`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn row(entries: &[(usize, i64)]) -> BTreeMap<usize, Rational> {
        entries.iter().map(|&(c, v)| (c, int(v))).collect()
    }

    #[test]
    fn rank_of_rational_matrix() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)], vec![int(0), int(1)]];
        assert_eq!(rational_rank(m), 2);
        assert_eq!(rational_rank(vec![vec![int(0), int(0)]]), 0);
    }

    #[test]
    fn bareiss_determinant() {
        let p = |s: &str| Poly::parse(s, 2).unwrap();
        let m = vec![vec![p("1"), p("1/2*a1")], vec![p("1"), p("-1/2*a1")]];
        let (rank, det) = poly_rank_and_det(m, 2).unwrap();
        assert_eq!(rank, 2);
        assert_eq!(det.unwrap(), p("-a1"));
        let m = vec![vec![p("a1"), p("a2")], vec![p("a1^2"), p("a1*a2")]];
        let (rank, det) = poly_rank_and_det(m, 2).unwrap();
        assert_eq!(rank, 1);
        assert!(det.unwrap().is_zero());
        let m = vec![
            vec![p("0"), p("a1"), p("1")],
            vec![p("a2"), p("1"), p("0")],
            vec![p("1"), p("0"), p("a1+a2")],
        ];
        // cofactor expansion along the first row
        let expected = p("-a1*(a2*(a1+a2)) + (-1)");
        assert_eq!(poly_rank_and_det(m, 2).unwrap().1.unwrap(), expected);
    }

    #[test]
    fn echelon_kernel() {
        let mut e = Echelon::new(3);
        assert!(e.insert(&row(&[(0, 1), (1, -1)])));
        assert!(!e.insert(&row(&[(0, 2), (1, -2)])));
        assert!(e.insert(&row(&[(1, 2), (2, -4)])));
        assert_eq!(e.nullity(), 1);
        let k = e.kernel();
        assert_eq!(k, vec![vec![int(2), int(2), int(1)]]);
        let mut f = Echelon::new(2);
        f.insert(&[(0, rat(1, 2)), (1, rat(1, 3))].into_iter().collect());
        assert_eq!(f.kernel(), vec![vec![rat(-2, 3), int(1)]]);
    }

    #[test]
    fn modular_kernel_reconstructs() {
        let p = PRIMES[0];
        let mut e = ModEchelon::new(3, p);
        assert!(e.insert(&row(&[(0, 1), (1, -1)])).unwrap());
        assert!(!e.insert(&row(&[(0, 2), (1, -2)])).unwrap());
        assert!(e.insert(&[(1, rat(1, 2)), (2, int(-1))].into_iter().collect()).unwrap());
        let k = e.kernel();
        assert_eq!(k.len(), 1);
        let pb = BigInt::from(p);
        let got: Vec<Rational> =
            k[0].iter().map(|&v| rational_reconstruct(&BigInt::from(v), &pb).unwrap()).collect();
        assert_eq!(got, vec![int(2), int(2), int(1)]);
    }

    #[test]
    fn reconstruction_and_crt() {
        let p = PRIMES[1];
        let q = rat(-7, 12);
        let v = reduce_mod(&q, p).unwrap();
        assert_eq!(rational_reconstruct(&BigInt::from(v), &BigInt::from(p)), Some(q.clone()));
        let (p0, p1) = (PRIMES[0], PRIMES[1]);
        let big = rat(123456789012345678, 987654321098765431);
        let a = BigInt::from(reduce_mod(&big, p0).unwrap());
        let combined = crt(&a, &BigInt::from(p0), reduce_mod(&big, p1).unwrap(), p1);
        let m = BigInt::from(p0) * BigInt::from(p1);
        assert_eq!(rational_reconstruct(&combined, &m), Some(big));
        assert!(reduce_mod(&Rational::new(BigInt::from(1), BigInt::from(p)), p).is_none());
    }
}
