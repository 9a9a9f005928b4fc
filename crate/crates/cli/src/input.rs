//! JSON input schemas and their conversion to library values.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rsl_core::graphs::OrderedGraph;
use rsl_core::hypercube::{H2Block, MaskPair};
use rsl_core::ideals::{OracleSequence, SymbolicSet, UltrafilterOracle};
use rsl_core::trees::{R1Block, SubtreeMask};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// An input problem, reported with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn err<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// A finite set written as comma-separated naturals; the empty set is `""`.
pub fn parse_key(key: &str) -> Result<Vec<u32>, InputError> {
    if key.trim().is_empty() {
        return Ok(Vec::new());
    }
    key.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| InputError(format!("bad set key {key:?}"))))
        .collect()
}

pub fn format_key(a: &[u32]) -> String {
    a.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Labels keyed by serialized sets. Keys must be strictly increasing lists.
pub fn parse_labels(raw: &BTreeMap<String, u64>) -> Result<BTreeMap<Vec<u32>, u64>, InputError> {
    let mut out = BTreeMap::new();
    for (k, &v) in raw {
        let a = parse_key(k)?;
        if a.windows(2).any(|w| w[0] >= w[1]) {
            return err(format!("set key {k:?} is not strictly increasing"));
        }
        if out.insert(a, v).is_some() {
            return err(format!("set key {k:?} repeated"));
        }
    }
    Ok(out)
}

/// Labels in the order of `domain`, requiring the keys to be exactly `domain`.
pub fn total_labels(labels: &BTreeMap<Vec<u32>, u64>, domain: &[Vec<u32>]) -> Result<Vec<u64>, InputError> {
    let mut out = Vec::with_capacity(domain.len());
    for a in domain {
        match labels.get(a) {
            Some(&v) => out.push(v),
            None => return err(format!("no label for {{{}}}", format_key(a))),
        }
    }
    if labels.len() != domain.len() {
        let extra = labels.keys().find(|k| domain.binary_search(k).is_err()).expect("more keys than domain");
        return err(format!("label for {{{}}} outside the domain", format_key(extra)));
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub ground: u32,
    pub labels: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
}

impl GraphJson {
    pub fn build(&self) -> Result<OrderedGraph, InputError> {
        OrderedGraph::new(self.n, &self.edges).map_err(|e| InputError(e.to_string()))
    }

    pub fn from_graph(g: &OrderedGraph) -> Self {
        GraphJson { n: g.n(), edges: g.edges() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRelationFile {
    pub a: GraphJson,
    pub b: GraphJson,
    pub c: GraphJson,
    #[serde(default)]
    pub q: Option<usize>,
    pub labels: BTreeMap<String, u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct R1BlockJson {
    pub index: usize,
    pub spine: u32,
    pub leaves: Vec<u32>,
}

impl R1BlockJson {
    pub fn build(self) -> Result<R1Block, InputError> {
        check_side("leaves", &self.leaves, self.index, self.spine)?;
        Ok(R1Block::new(self.index, self.spine, self.leaves))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2BlockJson {
    pub index: usize,
    pub spine: u32,
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

impl H2BlockJson {
    pub fn build(self) -> Result<H2Block, InputError> {
        check_side("rows", &self.rows, self.index, self.spine)?;
        check_side("cols", &self.cols, self.index, self.spine)?;
        Ok(H2Block::new(self.index, self.spine, self.rows, self.cols))
    }
}

fn check_side(name: &str, side: &[u32], index: usize, spine: u32) -> Result<(), InputError> {
    if side.len() != index + 1 {
        return err(format!("{name}: block at index {index} needs {} entries", index + 1));
    }
    if side.windows(2).any(|w| w[0] >= w[1]) {
        return err(format!("{name}: not strictly increasing"));
    }
    if side.last().is_some_and(|&i| i > spine) {
        return err(format!("{name}: entry above the spine"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum MaskJson {
    Named(String),
    Leaves { leaves: Vec<usize> },
}

impl MaskJson {
    pub fn build(&self) -> Result<SubtreeMask, InputError> {
        match self {
            MaskJson::Named(s) if s == "root" => Ok(SubtreeMask::Root),
            MaskJson::Named(s) if s == "root_spine" => Ok(SubtreeMask::RootSpine),
            MaskJson::Named(s) => err(format!("unknown mask {s:?}")),
            MaskJson::Leaves { leaves } => {
                if leaves.is_empty() || leaves.windows(2).any(|w| w[0] >= w[1]) {
                    return err("mask leaves must be nonempty and strictly increasing");
                }
                Ok(SubtreeMask::RootSpineLeaves(leaves.clone()))
            }
        }
    }

    pub fn from_mask(t: &SubtreeMask) -> Self {
        match t {
            SubtreeMask::Root => MaskJson::Named("root".into()),
            SubtreeMask::RootSpine => MaskJson::Named("root_spine".into()),
            SubtreeMask::RootSpineLeaves(v) => MaskJson::Leaves { leaves: v.clone() },
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MaskPairJson {
    pub t0: MaskJson,
    pub t1: MaskJson,
}

impl MaskPairJson {
    pub fn build(&self) -> Result<MaskPair, InputError> {
        Ok(MaskPair::new(self.t0.build()?, self.t1.build()?))
    }

    pub fn from_pair(p: &MaskPair) -> Self {
        MaskPairJson { t0: MaskJson::from_mask(&p.t0), t1: MaskJson::from_mask(&p.t1) }
    }
}

/// Recursive schema for eventually constant subsets of `ω^rank`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(tag = "form", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetJson {
    Finite {
        rank: usize,
        elements: Vec<u64>,
    },
    Cofinite {
        rank: usize,
        complement: Vec<u64>,
    },
    Product {
        rank: usize,
        #[serde(default)]
        exceptions: BTreeMap<String, SetJson>,
        tail: Box<SetJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        diagonal: Option<Box<SetJson>>,
    },
}

impl SetJson {
    pub fn build(&self) -> Result<SymbolicSet, InputError> {
        let (declared, set) = match self {
            SetJson::Finite { rank, elements } => (*rank, SymbolicSet::finite(elements.iter().copied())),
            SetJson::Cofinite { rank, complement } => (*rank, SymbolicSet::cofinite(complement.iter().copied())),
            SetJson::Product { rank, exceptions, tail, diagonal } => {
                let mut ex = BTreeMap::new();
                for (k, v) in exceptions {
                    let i: u64 = k.trim().parse().map_err(|_| InputError(format!("bad fiber index {k:?}")))?;
                    ex.insert(i, v.build()?);
                }
                let diagonal = diagonal.as_ref().map(|d| d.build()).transpose()?;
                (*rank, SymbolicSet::product(ex, tail.build()?, diagonal))
            }
        };
        set.validate().map_err(|e| InputError(e.to_string()))?;
        if set.rank() != declared {
            return err(format!("declared rank {declared} but the set has rank {}", set.rank()));
        }
        Ok(set)
    }

    pub fn from_set(s: &SymbolicSet) -> Self {
        match s {
            SymbolicSet::Finite(xs) => SetJson::Finite { rank: 1, elements: xs.iter().copied().collect() },
            SymbolicSet::Cofinite(xs) => SetJson::Cofinite { rank: 1, complement: xs.iter().copied().collect() },
            SymbolicSet::Product { exceptions, tail, diagonal } => SetJson::Product {
                rank: s.rank(),
                exceptions: exceptions.iter().map(|(i, c)| (i.to_string(), SetJson::from_set(c))).collect(),
                tail: Box::new(SetJson::from_set(tail)),
                diagonal: diagonal.as_ref().map(|d| Box::new(SetJson::from_set(d))),
            },
        }
    }
}

/// `cofinite` or `principal:N`.
pub fn parse_oracle(text: &str) -> Result<UltrafilterOracle, InputError> {
    let text = text.trim();
    if text == "cofinite" {
        return Ok(UltrafilterOracle::CofiniteKernel);
    }
    if let Some(n) = text.strip_prefix("principal:") {
        return n
            .trim()
            .parse()
            .map(UltrafilterOracle::Principal)
            .map_err(|_| InputError(format!("bad principal point in {text:?}")));
    }
    err(format!("unknown ultrafilter {text:?}; expected cofinite or principal:N"))
}

/// `DEFAULT[;N=ORACLE]...`, for example `cofinite;5=principal:0`.
pub fn parse_sequence(text: &str) -> Result<OracleSequence, InputError> {
    let mut parts = text.split(';');
    let default = parse_oracle(parts.next().unwrap_or(""))?;
    let mut exceptions = BTreeMap::new();
    for part in parts {
        let (n, o) = part.split_once('=').ok_or_else(|| InputError(format!("expected N=ORACLE, got {part:?}")))?;
        let n: u64 = n.trim().parse().map_err(|_| InputError(format!("bad index in {part:?}")))?;
        if exceptions.insert(n, parse_oracle(o)?).is_some() {
            return err(format!("index {n} given twice"));
        }
    }
    Ok(OracleSequence { exceptions, default })
}

pub fn oracle_name(o: UltrafilterOracle) -> String {
    match o {
        UltrafilterOracle::CofiniteKernel => "cofinite".into(),
        UltrafilterOracle::Principal(x) => format!("principal:{x}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip() {
        assert_eq!(parse_key("0,3,4").unwrap(), vec![0, 3, 4]);
        assert_eq!(parse_key("").unwrap(), Vec::<u32>::new());
        assert_eq!(format_key(&[1, 2]), "1,2");
        assert!(parse_key("1,x").is_err());
        let raw: BTreeMap<String, u64> = [("1,0".to_string(), 0)].into();
        assert!(parse_labels(&raw).is_err());
    }

    #[test]
    fn totality() {
        let raw: BTreeMap<String, u64> = [("0,1".to_string(), 0), ("0,2".to_string(), 1)].into();
        let labels = parse_labels(&raw).unwrap();
        assert_eq!(total_labels(&labels, &[vec![0, 1], vec![0, 2]]).unwrap(), vec![0, 1]);
        assert!(total_labels(&labels, &[vec![0, 1]]).is_err());
        assert!(total_labels(&labels, &[vec![0, 1], vec![0, 2], vec![1, 2]]).is_err());
    }

    #[test]
    fn set_schema_round_trip() {
        let text = r#"{"form":"product","rank":2,"tail":{"form":"cofinite","rank":1,"complement":[]},
                       "diagonal":{"form":"finite","rank":1,"elements":[]}}"#;
        let parsed: SetJson = serde_json::from_str(text).unwrap();
        let set = parsed.build().unwrap();
        assert_eq!(set, SymbolicSet::upper_triangle());
        assert_eq!(SetJson::from_set(&set), parsed);
        let wrong: SetJson = serde_json::from_str(r#"{"form":"finite","rank":2,"elements":[]}"#).unwrap();
        assert!(wrong.build().is_err());
    }

    #[test]
    fn oracle_specs() {
        assert_eq!(parse_oracle("principal:5").unwrap(), UltrafilterOracle::Principal(5));
        let v = parse_sequence("cofinite;5=principal:0").unwrap();
        assert_eq!(v.at(5), UltrafilterOracle::Principal(0));
        assert_eq!(v.at(4), UltrafilterOracle::CofiniteKernel);
        assert!(parse_sequence("cofinite;5").is_err());
        assert!(parse_oracle("nonprincipal").is_err());
    }
}
