//! Named bundles of exact checks: one-color relations, two-color relations,
//! and localization cross-checks.

use std::path::PathBuf;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::bimodule::{
    concat, element_from_tensor, localization_matrix, standard_tensor, Gallery, DEFAULT_LOCALIZATION_BOUND,
};
use crate::cartan::CartanData;
use crate::diagram::{Diagram, Slice};
use crate::error::{Error, Result};
use crate::localized::{agrees_with_local, local_ops_agree, LocalOp};
use crate::morphism::{compose, dot_bot, dot_top, identity, merge, slot_multiplication, split, Morphism};
use crate::poly::{decompose, demazure, half_root, Poly};
use crate::random::{random_element, random_poly, random_seq, seeded};
use crate::vertex::{alternating, hom_space_report, jones_wenzl, solve_vertex, solve_vertex_with_cache_dir};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    OneColor,
    TwoColor,
    Localization,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "onecolor" => Ok(Suite::OneColor),
            "twocolor" => Ok(Suite::TwoColor),
            "localization" => Ok(Suite::Localization),
            "all" => Ok(Suite::All),
            other => Err(Error::Schema(format!(
                "unknown suite `{other}` (expected onecolor, twocolor, localization or all)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::OneColor => "onecolor",
            Suite::TwoColor => "twocolor",
            Suite::Localization => "localization",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "status": if self.passed { "pass" } else { "fail" },
            "cases": self.cases,
        });
        if let Some(d) = &self.detail {
            v["detail"] = json!(d);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub cartan: Value,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "cartan": self.cartan,
            "passed": self.passed(),
            "checks": self.checks.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Bound on sequence length for localization matrices.
    pub max_seq: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { max_seq: DEFAULT_LOCALIZATION_BOUND, cache_dir: None }
    }
}

/// Runs the named suite with default options.
pub fn builtin_suites(name: &str, c: &Arc<CartanData>) -> Result<SuiteReport> {
    run_suite(Suite::parse(name)?, c, &SuiteOptions::default())
}

pub fn run_suite(suite: Suite, c: &Arc<CartanData>, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::OneColor | Suite::All) {
        checks.extend(onecolor(c));
    }
    if matches!(suite, Suite::TwoColor | Suite::All) {
        checks.extend(twocolor(c, opts));
    }
    if matches!(suite, Suite::Localization | Suite::All) {
        checks.extend(localization(c, opts));
    }
    Ok(SuiteReport { suite: suite.name().to_string(), cartan: c.to_json(), checks })
}

/// Runs `body`, turning errors into failures. `body` returns the number of
/// cases checked and the first failing case, if any.
fn check(name: impl Into<String>, body: impl FnOnce() -> Result<(usize, Option<String>)>) -> CheckResult {
    let name = name.into();
    match body() {
        Ok((cases, None)) => CheckResult { name, passed: true, cases, detail: None },
        Ok((cases, Some(detail))) => CheckResult { name, passed: false, cases, detail: Some(detail) },
        Err(e) => CheckResult { name, passed: false, cases: 0, detail: Some(e.to_string()) },
    }
}

/// Every sequence of length at most `max_len` over `rank` colors.
pub fn all_sequences(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &layer {
            for u in 0..rank {
                let mut s: Vec<usize> = seq.clone();
                s.push(u);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Ordered pairs of distinct reflections with a supported braid order.
pub fn two_color_pairs(c: &CartanData) -> Result<Vec<(usize, usize, usize)>> {
    let mut out = Vec::new();
    for s in 0..c.rank() {
        for t in 0..c.rank() {
            if s != t {
                let m = c.m_order(s, t)?;
                if [2, 3, 4, 6].contains(&m) {
                    out.push((s, t, m));
                }
            }
        }
    }
    Ok(out)
}

fn seq_label(c: &CartanData, seq: &[usize]) -> String {
    let labels: Vec<&str> = seq.iter().map(|&i| c.label(i)).collect();
    format!("[{}]", labels.join(","))
}

fn inserted(seq: &[usize], position: usize, color: usize) -> Vec<usize> {
    let mut out = seq.to_vec();
    out.insert(position, color);
    out
}

/// Every one-color generator placed on `seq`, with its local counterpart.
pub fn one_color_generators(c: &Arc<CartanData>, seq: &[usize]) -> Result<Vec<(String, Morphism, LocalOp)>> {
    let mut out = Vec::new();
    let n = seq.len();
    for i in 1..=n {
        out.push((format!("dot_top@{i}"), dot_top(c, seq, i)?, LocalOp::DotTop { strand: i }));
        out.push((format!("split@{i}"), split(c, seq, i)?, LocalOp::Split { strand: i }));
        if i < n && seq[i - 1] == seq[i] {
            out.push((format!("merge@{i}"), merge(c, seq, i)?, LocalOp::Merge { strand: i }));
        }
    }
    for p in 0..=n {
        for u in 0..c.rank() {
            out.push((
                format!("dot_bot@{p}/{}", c.label(u)),
                dot_bot(c, seq, p, u)?,
                LocalOp::DotBot { position: p, color: u },
            ));
        }
    }
    Ok(out)
}

fn onecolor(c: &Arc<CartanData>) -> Vec<CheckResult> {
    let r = c.rank();
    vec![
        check("generators are bimodule morphisms of the stated degree", || {
            let mut cases = 0;
            for seq in all_sequences(r, 3) {
                for (name, m, _) in one_color_generators(c, &seq)? {
                    cases += 1;
                    if !m.is_bimodule_morphism() || !m.degree_check() {
                        return Ok((cases, Some(format!("{name} on {}", seq_label(c, &seq)))));
                    }
                }
            }
            Ok((cases, None))
        }),
        check("dot then merge is the identity", || {
            let mut cases = 0;
            for seq in all_sequences(r, 3) {
                for i in 1..=seq.len() {
                    let u = seq[i - 1];
                    let lhs = compose(&merge(c, &inserted(&seq, i, u), i)?, &dot_bot(c, &seq, i, u)?)?;
                    cases += 1;
                    if lhs != identity(c, &seq)? {
                        return Ok((cases, Some(format!("strand {i} of {}", seq_label(c, &seq)))));
                    }
                }
            }
            Ok((cases, None))
        }),
        check("barbell is multiplication by the root", || {
            let mut cases = 0;
            for seq in all_sequences(r, 2) {
                for p in 0..=seq.len() {
                    for u in 0..r {
                        let lhs = compose(&dot_top(c, &inserted(&seq, p, u), p + 1)?, &dot_bot(c, &seq, p, u)?)?;
                        let rhs = slot_multiplication(c, &seq, p, &Poly::var(r, u))?;
                        cases += 1;
                        if lhs != rhs {
                            return Ok((cases, Some(format!("gap {p}, color {} on {}", c.label(u), seq_label(c, &seq)))));
                        }
                    }
                }
            }
            Ok((cases, None))
        }),
        check("split then merge vanishes", || {
            let mut cases = 0;
            for seq in all_sequences(r, 3) {
                for i in 1..=seq.len() {
                    let u = seq[i - 1];
                    let lhs = compose(&merge(c, &inserted(&seq, i, u), i)?, &split(c, &seq, i)?)?;
                    cases += 1;
                    if !lhs.is_zero() {
                        return Ok((cases, Some(format!("strand {i} of {}", seq_label(c, &seq)))));
                    }
                }
            }
            Ok((cases, None))
        }),
        check("merge acts by the Demazure operator on pure tensors", || {
            let mut rng = seeded(11);
            let mut cases = 0;
            for u in 0..r {
                let m = merge(c, &[u, u], 1)?;
                for _ in 0..10 {
                    let (a, b, d) = (random_poly(&mut rng, r, 3), random_poly(&mut rng, r, 4), random_poly(&mut rng, r, 3));
                    let src = element_from_tensor(c, &[u, u], &[a.clone(), b.clone(), d.clone()])?;
                    let expected = element_from_tensor(c, &[u], &[&a * &demazure(c, u, &b)?, d])?;
                    cases += 1;
                    if m.apply(&src)? != expected {
                        return Ok((cases, Some(format!("color {}, b = {b}", c.label(u)))));
                    }
                }
            }
            Ok((cases, None))
        }),
        check("Demazure decomposition reassembles", || {
            let mut rng = seeded(12);
            let mut cases = 0;
            for u in 0..r {
                for _ in 0..20 {
                    let f = random_poly(&mut rng, r, 6);
                    let (p, d) = decompose(c, u, &f)?;
                    cases += 1;
                    if &p + &(&d * &half_root(r, u)) != f {
                        return Ok((cases, Some(format!("f = {f}"))));
                    }
                }
            }
            Ok((cases, None))
        }),
    ]
}

fn vertex_for(c: &Arc<CartanData>, s: usize, t: usize, opts: &SuiteOptions) -> Result<Morphism> {
    match &opts.cache_dir {
        Some(dir) => solve_vertex_with_cache_dir(c, s, t, dir),
        None => solve_vertex(c, s, t),
    }
}

fn pass_if(cond: bool, detail: impl FnOnce() -> String) -> (usize, Option<String>) {
    (1, if cond { None } else { Some(detail()) })
}

fn twocolor(c: &Arc<CartanData>, opts: &SuiteOptions) -> Vec<CheckResult> {
    let pairs = match two_color_pairs(c) {
        Ok(p) => p,
        Err(e) => return vec![check("two-color pairs", || Err(e))],
    };
    let mut out = Vec::new();
    for (s, t, m) in pairs {
        let tag = format!("({},{})", c.label(s), c.label(t));
        out.push(check(format!("vertex {tag}: hom space is one-dimensional"), || {
            let report = hom_space_report(c, s, t)?;
            Ok(pass_if(report.dimension == 1 && report.lower_preserving_dimension == 1, || {
                report.to_json().to_string()
            }))
        }));
        out.push(check(format!("vertex {tag}: normalized degree-0 bimodule morphism"), || {
            let f = vertex_for(c, s, t, opts)?;
            let top = (1u32 << m) - 1;
            let preserves = (0..top).all(|e| f.entry(top, e).is_zero());
            Ok(pass_if(
                f.entry(top, top).is_one() && f.degree() == 0 && f.degree_check() && f.is_bimodule_morphism() && preserves,
                || "normalization, degree or right-linearity failed".into(),
            ))
        }));
        out.push(check(format!("jw {tag}: idempotent"), || {
            let jw = jones_wenzl(c, s, t)?;
            Ok(pass_if(compose(&jw, &jw)? == jw, || "JW∘JW ≠ JW".into()))
        }));
        out.push(check(format!("jw {tag}: absorbed by the vertex"), || {
            let f = vertex_for(c, s, t, opts)?;
            let jw = jones_wenzl(c, s, t)?;
            let fff = compose(&f, &compose(&vertex_for(c, t, s, opts)?, &f)?)?;
            Ok(pass_if(compose(&f, &jw)? == f && fff == f, || "f∘JW ≠ f".into()))
        }));
        out.push(check(format!("jw {tag}: two stacked vertices"), || {
            let seq = alternating(s, t, m);
            let lhs = Diagram::new(c.clone(), seq.clone(), vec![Slice::vertex(1), Slice::vertex(1)])?;
            let rhs = Diagram::new(c.clone(), seq, vec![Slice::jw(1)])?;
            let eq = lhs.evaluate_with_cache(opts.cache_dir.as_deref())? == rhs.evaluate_with_cache(opts.cache_dir.as_deref())?;
            Ok(pass_if(eq, || "f_{t,s}∘f_{s,t} ≠ JW".into()))
        }));
        out.push(check(format!("dot contraction {tag}: last leg of the vertex, first leg after JW"), || {
            let (lhs, rhs) = dot_contraction(c, s, t)?;
            let diff = lhs.first_difference(&rhs)?;
            Ok((1, diff.map(|d| d.to_string())))
        }));
    }
    out
}

/// Both sides of the two-color dot contraction as maps `B(s,t,…) → B(t,s,…)` minus one strand:
/// a dot on the last strand above `f_{s,t}`, and a dot on the first strand above `JW_{s,t}`.
pub fn dot_contraction(c: &Arc<CartanData>, s: usize, t: usize) -> Result<(Morphism, Morphism)> {
    let f = solve_vertex(c, s, t)?;
    let m = f.source().len();
    let lhs = compose(&dot_top(c, f.target(), m)?, &f)?;
    let rhs = compose(&dot_top(c, f.source(), 1)?, &jones_wenzl(c, s, t)?)?;
    Ok((lhs, rhs))
}

fn localization(c: &Arc<CartanData>, opts: &SuiteOptions) -> Vec<CheckResult> {
    let r = c.rank();
    let short = all_sequences(r, 3.min(opts.max_seq));
    let mut out = vec![
        check("localization matrices have full rank", || {
            let mut cases = 0;
            for seq in &short {
                cases += 1;
                if !localization_matrix(c, seq, opts.max_seq)?.full_rank {
                    return Ok((cases, Some(seq_label(c, seq))));
                }
            }
            Ok((cases, None))
        }),
        check("localization is twisted-equivariant", || {
            let mut rng = seeded(21);
            let mut cases = 0;
            for len in 0..=3 {
                for _ in 0..3 {
                    let seq = random_seq(&mut rng, r, len);
                    let m = random_element(&mut rng, c, &seq, 2);
                    let f = random_poly(&mut rng, r, 2);
                    for g in Gallery::all(&seq) {
                        let loc = m.localize(&g)?;
                        cases += 1;
                        if m.right_mul(&f)?.localize(&g)? != loc.right_mul(&f)?
                            || m.left_mul(&f)?.localize(&g)? != loc.left_mul(&f)?
                        {
                            return Ok((cases, Some(format!("{} at {g}", seq_label(c, &seq)))));
                        }
                    }
                }
            }
            Ok((cases, None))
        }),
        check("localization turns concatenation into the standard tensor product", || {
            let mut rng = seeded(22);
            let mut cases = 0;
            for _ in 0..10 {
                let (la, lb) = (rng_len(&mut rng), rng_len(&mut rng));
                let (sa, sb) = (random_seq(&mut rng, r, la), random_seq(&mut rng, r, lb));
                let a = random_element(&mut rng, c, &sa, 2);
                let b = random_element(&mut rng, c, &sb, 2);
                let ab = concat(&a, &b)?;
                for ga in Gallery::all(&sa) {
                    for gb in Gallery::all(&sb) {
                        let joint = Gallery::new(ab.seq().to_vec(), ga.bits | gb.bits << la)?;
                        cases += 1;
                        if ab.localize(&joint)? != standard_tensor(&a.localize(&ga)?, &b.localize(&gb)?)? {
                            return Ok((cases, Some(format!("{} · {}", seq_label(c, &sa), seq_label(c, &sb)))));
                        }
                    }
                }
            }
            Ok((cases, None))
        }),
        check("one-color generators agree with their fixed-point formulas", || {
            let mut cases = 0;
            for seq in all_sequences(r, 2) {
                for (name, m, op) in one_color_generators(c, &seq)? {
                    cases += 1;
                    if !agrees_with_local(&m, &[op])? {
                        return Ok((cases, Some(format!("{name} on {}", seq_label(c, &seq)))));
                    }
                }
            }
            Ok((cases, None))
        }),
        check("one-color relations hold after localization", || {
            let mut cases = 0;
            for seq in all_sequences(r, 2) {
                for i in 1..=seq.len() {
                    let u = seq[i - 1];
                    let lhs = [LocalOp::DotBot { position: i, color: u }, LocalOp::Merge { strand: i }];
                    cases += 1;
                    if !local_ops_agree(c, &seq, &lhs, &[])? {
                        return Ok((cases, Some(format!("dot-merge at {i} on {}", seq_label(c, &seq)))));
                    }
                }
                for p in 0..=seq.len() {
                    for u in 0..r {
                        let lhs = [LocalOp::DotBot { position: p, color: u }, LocalOp::DotTop { strand: p + 1 }];
                        let rhs = [LocalOp::RootAtGap { position: p, root: u }];
                        cases += 1;
                        if !local_ops_agree(c, &seq, &lhs, &rhs)? {
                            return Ok((cases, Some(format!("barbell at {p} on {}", seq_label(c, &seq)))));
                        }
                    }
                }
            }
            Ok((cases, None))
        }),
    ];
    let pairs = match two_color_pairs(c) {
        Ok(p) => p,
        Err(e) => {
            out.push(check("two-color pairs", || Err(e)));
            return out;
        }
    };
    for (s, t, m) in pairs {
        let tag = format!("({},{})", c.label(s), c.label(t));
        out.push(check(format!("two-color relations {tag} hold after localization"), || {
            two_color_local(c, s, t, m, opts)
        }));
    }
    out
}

fn rng_len<R: rand::Rng>(rng: &mut R) -> usize {
    rng.gen_range(0..=3)
}

/// Localized cross-check of the vertex, the Jones–Wenzl relations and the dot contraction.
pub fn two_color_local(
    c: &Arc<CartanData>,
    s: usize,
    t: usize,
    m: usize,
    opts: &SuiteOptions,
) -> Result<(usize, Option<String>)> {
    let seq = alternating(s, t, m);
    let v = LocalOp::Vertex { strand: 1 };
    let jw = LocalOp::JonesWenzl { strand: 1 };
    let f = vertex_for(c, s, t, opts)?;
    let jw_matrix = jones_wenzl(c, s, t)?;
    let (dot_lhs, dot_rhs) = dot_contraction(c, s, t)?;
    let matrix_cases: [(&str, &Morphism, Vec<LocalOp>); 4] = [
        ("vertex", &f, vec![v.clone()]),
        ("JW", &jw_matrix, vec![jw.clone()]),
        ("dot on the vertex", &dot_lhs, vec![v.clone(), LocalOp::DotTop { strand: m }]),
        ("dot on JW", &dot_rhs, vec![jw.clone(), LocalOp::DotTop { strand: 1 }]),
    ];
    let mut cases = 0;
    for (name, matrix, ops) in &matrix_cases {
        cases += 1;
        if !agrees_with_local(matrix, ops)? {
            return Ok((cases, Some(format!("{name}: matrix and fixed-point formula differ"))));
        }
    }
    let relations: [(&str, Vec<LocalOp>, Vec<LocalOp>); 4] = [
        ("JW idempotent", vec![jw.clone(), jw.clone()], vec![jw.clone()]),
        ("vertex absorbs JW", vec![jw.clone(), v.clone()], vec![v.clone()]),
        ("two vertices give JW", vec![v.clone(), v.clone()], vec![jw.clone()]),
        (
            "dot contraction",
            vec![v.clone(), LocalOp::DotTop { strand: m }],
            vec![jw.clone(), LocalOp::DotTop { strand: 1 }],
        ),
    ];
    for (name, lhs, rhs) in &relations {
        cases += 1;
        if !local_ops_agree(c, &seq, lhs, rhs)? {
            return Ok((cases, Some(format!("{name} fails after localization"))));
        }
    }
    Ok((cases, None))
}
