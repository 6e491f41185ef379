//! Planar diagrams as stacks of one-generator slices, compiled to morphisms.
//!
//! JSON form:
//!
//! ```json
//! {"cartan": "A2", "bottom": ["1", "2"],
//!  "slices": [{"gen": "dot_bot", "strand": 0, "color": "1"}, {"gen": "merge", "strand": 1}]}
//! ```
//!
//! Colors are Cartan labels. `strand` is 1-based for every generator except
//! `dot_bot`, where it names the 0-based gap the new strand is inserted into.
//! `vertex` and `jw` take the first strand of an alternating run.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::localized::LocalOp;
use crate::morphism::{compose, dot_bot, dot_top, extend, identity, merge, split, EntryDifference, Morphism};
use crate::vertex::{alternating, solve_vertex, solve_vertex_with_cache_dir};

pub use crate::suites::builtin_suites;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    DotTop,
    DotBot,
    Split,
    Merge,
    Vertex,
    JonesWenzl,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::DotTop,
        Generator::DotBot,
        Generator::Split,
        Generator::Merge,
        Generator::Vertex,
        Generator::JonesWenzl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::DotTop => "dot_top",
            Generator::DotBot => "dot_bot",
            Generator::Split => "split",
            Generator::Merge => "merge",
            Generator::Vertex => "vertex",
            Generator::JonesWenzl => "jw",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == name)
            .ok_or_else(|| Error::Schema(format!("unknown generator `{name}`")))
    }

    pub fn degree(self) -> i64 {
        match self {
            Generator::DotBot => 2,
            Generator::Merge => -2,
            _ => 0,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub gen: Generator,
    /// 1-based strand, or 0-based gap for `dot_bot`.
    pub strand: usize,
    /// 0-based reflection index; required for `dot_bot`.
    pub color: Option<usize>,
}

impl Slice {
    pub fn new(gen: Generator, strand: usize, color: Option<usize>) -> Self {
        Self { gen, strand, color }
    }

    pub fn dot_top(strand: usize) -> Self {
        Self::new(Generator::DotTop, strand, None)
    }

    pub fn dot_bot(gap: usize, color: usize) -> Self {
        Self::new(Generator::DotBot, gap, Some(color))
    }

    pub fn split(strand: usize) -> Self {
        Self::new(Generator::Split, strand, None)
    }

    pub fn merge(strand: usize) -> Self {
        Self::new(Generator::Merge, strand, None)
    }

    pub fn vertex(strand: usize) -> Self {
        Self::new(Generator::Vertex, strand, None)
    }

    pub fn jw(strand: usize) -> Self {
        Self::new(Generator::JonesWenzl, strand, None)
    }

    /// Boundary above this slice, validating arity and colors.
    pub fn apply_to_boundary(&self, c: &CartanData, seq: &[usize]) -> Result<Vec<usize>> {
        let n = seq.len();
        let strand_color = |i: usize| -> Result<usize> {
            if i == 0 || i > n {
                return Err(Error::StrandOutOfRange { strand: i, len: n });
            }
            Ok(seq[i - 1])
        };
        let check_color = |actual: usize| -> Result<()> {
            match self.color {
                Some(u) if u != actual => Err(Error::BoundaryMismatch(format!(
                    "{} on strand {} names color {}, but the strand has color {}",
                    self.gen,
                    self.strand,
                    c.label(u),
                    c.label(actual)
                ))),
                _ => Ok(()),
            }
        };
        let mut out = seq.to_vec();
        match self.gen {
            Generator::DotTop => {
                check_color(strand_color(self.strand)?)?;
                out.remove(self.strand - 1);
            }
            Generator::DotBot => {
                let u = self
                    .color
                    .ok_or_else(|| Error::Schema("dot_bot needs a color".into()))?;
                c.check_index(u)?;
                if self.strand > n {
                    return Err(Error::InvalidPosition { position: self.strand, len: n });
                }
                out.insert(self.strand, u);
            }
            Generator::Split => {
                let u = strand_color(self.strand)?;
                check_color(u)?;
                out.insert(self.strand, u);
            }
            Generator::Merge => {
                let u = strand_color(self.strand)?;
                let v = strand_color(self.strand + 1)?;
                check_color(u)?;
                if u != v {
                    return Err(Error::AdjacentColorsDiffer { strand: self.strand });
                }
                out.remove(self.strand);
            }
            Generator::Vertex | Generator::JonesWenzl => {
                let s = strand_color(self.strand)?;
                let t = strand_color(self.strand + 1)?;
                check_color(s)?;
                if s == t {
                    return Err(Error::SameReflection(s));
                }
                let m = c.m_order(s, t)?;
                let start = self.strand - 1;
                if start + m > n || seq[start..start + m] != alternating(s, t, m)[..] {
                    return Err(Error::BoundaryMismatch(format!(
                        "{} at strand {} needs an alternating run of length {m}",
                        self.gen, self.strand
                    )));
                }
                if self.gen == Generator::Vertex {
                    out[start..start + m].copy_from_slice(&alternating(t, s, m));
                }
            }
        }
        Ok(out)
    }

    pub fn to_local_op(&self) -> LocalOp {
        match self.gen {
            Generator::DotTop => LocalOp::DotTop { strand: self.strand },
            Generator::DotBot => LocalOp::DotBot { position: self.strand, color: self.color.unwrap_or(0) },
            Generator::Split => LocalOp::Split { strand: self.strand },
            Generator::Merge => LocalOp::Merge { strand: self.strand },
            Generator::Vertex => LocalOp::Vertex { strand: self.strand },
            Generator::JonesWenzl => LocalOp::JonesWenzl { strand: self.strand },
        }
    }

    fn to_json(&self, c: &CartanData) -> Value {
        let mut obj = Map::new();
        obj.insert("gen".into(), json!(self.gen.name()));
        obj.insert("strand".into(), json!(self.strand));
        if let Some(u) = self.color {
            obj.insert("color".into(), json!(c.label(u)));
        }
        Value::Object(obj)
    }

    fn from_json(c: &CartanData, value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Schema("a slice must be an object".into()))?;
        let gen = Generator::parse(
            obj.get("gen")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Schema("slice needs a string `gen`".into()))?,
        )?;
        let strand = obj
            .get("strand")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("slice needs a non-negative integer `strand`".into()))?
            as usize;
        let color = match obj.get("color") {
            None | Some(Value::Null) => None,
            Some(v) => Some(parse_color(c, v)?),
        };
        Ok(Self { gen, strand, color })
    }
}

fn parse_color(c: &CartanData, v: &Value) -> Result<usize> {
    match v {
        Value::String(s) => c.index_of(s),
        Value::Number(n) => c.index_of(&n.to_string()),
        _ => Err(Error::Schema(format!("bad color {v}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub cartan: Arc<CartanData>,
    pub bottom: Vec<usize>,
    pub slices: Vec<Slice>,
}

impl Diagram {
    /// Validates the slices against the bottom boundary.
    pub fn new(cartan: Arc<CartanData>, bottom: Vec<usize>, slices: Vec<Slice>) -> Result<Self> {
        cartan.check_word(&bottom)?;
        let d = Self { cartan, bottom, slices };
        d.boundaries()?;
        Ok(d)
    }

    /// Boundary below each slice, followed by the top boundary.
    pub fn boundaries(&self) -> Result<Vec<Vec<usize>>> {
        let mut out = vec![self.bottom.clone()];
        for (k, slice) in self.slices.iter().enumerate() {
            let next = slice
                .apply_to_boundary(&self.cartan, out.last().expect("nonempty"))
                .map_err(|e| annotate(e, k))?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn top(&self) -> Result<Vec<usize>> {
        Ok(self.boundaries()?.pop().expect("nonempty"))
    }

    pub fn degree(&self) -> i64 {
        self.slices.iter().map(|s| s.gen.degree()).sum()
    }

    pub fn local_ops(&self) -> Vec<LocalOp> {
        self.slices.iter().map(Slice::to_local_op).collect()
    }

    pub fn evaluate(&self) -> Result<Morphism> {
        self.evaluate_with_cache(None)
    }

    /// Composes the slice morphisms, reading vertex solutions from `cache_dir` if given.
    pub fn evaluate_with_cache(&self, cache_dir: Option<&Path>) -> Result<Morphism> {
        let bounds = self.boundaries()?;
        let mut acc = identity(&self.cartan, &self.bottom)?;
        for (slice, seq) in self.slices.iter().zip(&bounds) {
            let step = slice_morphism(&self.cartan, slice, seq, cache_dir)?;
            acc = compose(&step, &acc)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let labels = |seq: &[usize]| seq.iter().map(|&i| json!(self.cartan.label(i))).collect::<Vec<_>>();
        json!({
            "cartan": self.cartan.to_json(),
            "bottom": labels(&self.bottom),
            "slices": self.slices.iter().map(|s| s.to_json(&self.cartan)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Schema("a diagram must be an object".into()))?;
        let cartan = Arc::new(CartanData::from_json(
            obj.get("cartan").ok_or_else(|| Error::Schema("missing `cartan`".into()))?,
        )?);
        let bottom = obj
            .get("bottom")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("`bottom` must be a list of colors".into()))?
            .iter()
            .map(|v| parse_color(&cartan, v))
            .collect::<Result<Vec<_>>>()?;
        let slices = match obj.get("slices") {
            None => Vec::new(),
            Some(v) => v
                .as_array()
                .ok_or_else(|| Error::Schema("`slices` must be a list".into()))?
                .iter()
                .map(|s| Slice::from_json(&cartan, s))
                .collect::<Result<Vec<_>>>()?,
        };
        Self::new(cartan, bottom, slices)
    }
}

fn annotate(e: Error, slice: usize) -> Error {
    match e {
        Error::BoundaryMismatch(msg) => Error::BoundaryMismatch(format!("slice {slice}: {msg}")),
        Error::Schema(msg) => Error::Schema(format!("slice {slice}: {msg}")),
        other => other,
    }
}

fn slice_morphism(c: &Arc<CartanData>, slice: &Slice, seq: &[usize], cache_dir: Option<&Path>) -> Result<Morphism> {
    match slice.gen {
        Generator::DotTop => dot_top(c, seq, slice.strand),
        Generator::DotBot => dot_bot(c, seq, slice.strand, slice.color.unwrap_or(0)),
        Generator::Split => split(c, seq, slice.strand),
        Generator::Merge => merge(c, seq, slice.strand),
        Generator::Vertex | Generator::JonesWenzl => {
            let start = slice.strand - 1;
            let (s, t) = (seq[start], seq[start + 1]);
            let m = c.m_order(s, t)?;
            let vertex = |a, b| match cache_dir {
                Some(dir) => solve_vertex_with_cache_dir(c, a, b, dir),
                None => solve_vertex(c, a, b),
            };
            let f = vertex(s, t)?;
            let inner = if slice.gen == Generator::Vertex { f } else { compose(&vertex(t, s)?, &f)? };
            extend(&inner, &seq[..start], &seq[start + m..])
        }
    }
}

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let value: Value = serde_json::from_str(text)?;
    Diagram::from_json(&value)
}

pub fn evaluate(d: &Diagram) -> Result<Morphism> {
    d.evaluate()
}

/// Outcome of comparing two diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub equal: bool,
    pub witness: Option<EntryDifference>,
}

impl RelationReport {
    pub fn to_json(&self) -> Value {
        match &self.witness {
            None => json!({ "equal": self.equal }),
            Some(w) => json!({
                "equal": self.equal,
                "witness": {
                    "target": w.target_bits,
                    "source": w.source_bits,
                    "lhs": w.left.to_string(),
                    "rhs": w.right.to_string(),
                },
            }),
        }
    }
}

pub fn check_relation(lhs: &Diagram, rhs: &Diagram) -> Result<RelationReport> {
    if lhs.cartan != rhs.cartan {
        return Err(Error::BoundaryMismatch("diagrams use different Cartan data".into()));
    }
    if lhs.bottom != rhs.bottom || lhs.top()? != rhs.top()? {
        return Err(Error::BoundaryMismatch(format!(
            "boundaries differ: {:?} → {:?} vs {:?} → {:?}",
            lhs.bottom,
            lhs.top()?,
            rhs.bottom,
            rhs.top()?
        )));
    }
    compare_morphisms(&lhs.evaluate()?, &rhs.evaluate()?)
}

pub fn compare_morphisms(a: &Morphism, b: &Morphism) -> Result<RelationReport> {
    let witness = a.first_difference(b)?;
    Ok(RelationReport { equal: witness.is_none(), witness })
}
