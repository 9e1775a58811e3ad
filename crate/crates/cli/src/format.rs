//! JSON file formats. Every index in a file is 1-based; the library is
//! 0-based, so conversion happens here and nowhere else.

use distmatch::exact::DoubleMatchingInstance;
use distmatch::gen::{SimpleGraph, ThreeDimMatchingInstance};
use distmatch::{Bound, Edge, Instance, Rational};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

/// `{"n", "t_count", "d", "cyclic", "b_s", "b_t", "edges": [[s, t, num, den], ...]}`
/// with `null` in `b_t` for an unbounded right node.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub t_count: usize,
    pub d: usize,
    pub cyclic: bool,
    pub b_s: Vec<u32>,
    pub b_t: Vec<Option<u32>>,
    pub edges: Vec<Vec<Value>>,
    /// Intended left degrees of the Hamiltonian path reduction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_profile: Option<Vec<u32>>,
}

/// A rational as a JSON integer pair, falling back to decimal strings when
/// a part does not fit in 64 bits.
pub fn rational_parts(x: &Rational) -> (Value, Value) {
    let part = |v: &BigInt| match v.to_i64() {
        Some(i) => Value::from(i),
        None => Value::from(v.to_string()),
    };
    (part(x.numer()), part(x.denom()))
}

fn big(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| CliError::BadInput(format!("not an integer: {n}"))),
        Value::String(s) => s.parse().map_err(|_| CliError::BadInput(format!("not an integer: {s}"))),
        other => Err(CliError::BadInput(format!("not an integer: {other}"))),
    }
}

pub fn parse_rational(num: &Value, den: &Value) -> Result<Rational, CliError> {
    let (num, den) = (big(num)?, big(den)?);
    if den.is_zero() {
        return Err(CliError::BadInput("zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

fn one_based(v: &Value, what: &str) -> Result<usize, CliError> {
    match v.as_u64() {
        Some(i) if i >= 1 => Ok(i as usize - 1),
        _ => Err(CliError::BadInput(format!("{what} index must be a positive integer, got {v}"))),
    }
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance, CliError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for row in &self.edges {
            let weight = match row.len() {
                3 => parse_rational(&row[2], &Value::from(1))?,
                4 => parse_rational(&row[2], &row[3])?,
                _ => return Err(CliError::BadInput("edges are [s, t, num, den]".into())),
            };
            edges.push(Edge { s: one_based(&row[0], "left")?, t: one_based(&row[1], "right")?, weight });
        }
        let b_t = self.b_t.iter().map(|b| b.map_or(Bound::Unbounded, Bound::Finite)).collect();
        Instance::new(self.n, self.t_count, self.d, self.cyclic, self.b_s.clone(), b_t, edges)
            .map_err(|e| CliError::BadInput(e.to_string()))
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let edges = inst
            .edges()
            .iter()
            .map(|e| {
                let (num, den) = rational_parts(&e.weight);
                vec![Value::from(e.s + 1), Value::from(e.t + 1), num, den]
            })
            .collect();
        InstanceFile {
            n: inst.n(),
            t_count: inst.t_count(),
            d: inst.d(),
            cyclic: inst.is_cyclic(),
            b_s: inst.b_s().to_vec(),
            b_t: inst.b_t().iter().map(|b| b.finite()).collect(),
            edges,
            b_profile: None,
        }
    }
}

/// Hex SHA-256 of the canonical serialization of an instance.
pub fn digest(inst: &Instance) -> String {
    let canonical = serde_json::to_string(&InstanceFile::from_instance(inst)).expect("serializable");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// `{"x", "y", "z", "triples": [[i, j, k], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThreeDimFile {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub triples: Vec<[usize; 3]>,
}

impl ThreeDimFile {
    pub fn to_hypergraph(&self) -> Result<ThreeDimMatchingInstance, CliError> {
        let mut triples = Vec::with_capacity(self.triples.len());
        for &[a, b, c] in &self.triples {
            if a == 0 || b == 0 || c == 0 {
                return Err(CliError::BadInput("triple elements are 1-based".into()));
            }
            triples.push((a - 1, b - 1, c - 1));
        }
        ThreeDimMatchingInstance::new(self.x, self.y, self.z, triples)
            .map_err(|e| CliError::BadInput(e.to_string()))
    }

    pub fn from_hypergraph(h: &ThreeDimMatchingInstance) -> Self {
        ThreeDimFile {
            x: h.x,
            y: h.y,
            z: h.z,
            triples: h.triples().iter().map(|&(a, b, c)| [a + 1, b + 1, c + 1]).collect(),
        }
    }
}

/// `{"nodes", "edges": [[u, v], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub nodes: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<SimpleGraph, CliError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &[u, v] in &self.edges {
            if u == 0 || v == 0 {
                return Err(CliError::BadInput("graph nodes are 1-based".into()));
            }
            edges.push((u - 1, v - 1));
        }
        SimpleGraph::new(self.nodes, edges).map_err(|e| CliError::BadInput(e.to_string()))
    }
}

/// `{"s_count", "t_count", "s1": [...], "s2": [...], "edges": [[s, t], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DoubleMatchingFile {
    pub s_count: usize,
    pub t_count: usize,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

impl DoubleMatchingFile {
    pub fn from_instance(dm: &DoubleMatchingInstance) -> Self {
        let members = |f: &dyn Fn(usize) -> bool| (0..dm.s_count()).filter(|&s| f(s)).map(|s| s + 1).collect();
        DoubleMatchingFile {
            s_count: dm.s_count(),
            t_count: dm.t_count(),
            s1: members(&|s| dm.in_s1(s)),
            s2: members(&|s| dm.in_s2(s)),
            edges: dm.edges().iter().map(|&(s, t)| [s + 1, t + 1]).collect(),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::BadInput(format!("malformed {what}: {e}")))
}
