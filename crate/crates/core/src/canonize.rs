//! Brute-force canonization: Erdős–Rado on `[G]^k`, Pudlák–Rödl on
//! Nash-Williams families, and the finite Ramsey searches behind them.
//!
//! Every search returns the least witness in a fixed order, so results are
//! reproducible. `None` only means no witness fits inside the given ground.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use itertools::Itertools;

use crate::ellentuck::{is_nash_williams, FlatFamily};
use crate::subsets::{binomial, is_subset_sorted, k_subsets};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonError {
    /// An index set does not fit the arity of the set it projects.
    ArityMismatch { arity: usize, index: usize },
    /// The relation's domain is not `[G]^k` for its ground.
    NotCompleteUniform(String),
    NotNashWilliams,
    LabelCount { members: usize, labels: usize },
    PreconditionViolated(&'static str),
    CapExceeded { cap: u32 },
    /// Exhaustion over colorings would exceed the built-in limit.
    SearchTooLarge { l: u32, colorings_log2: u32 },
}

impl fmt::Display for CanonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonError::ArityMismatch { arity, index } => {
                write!(f, "index {index} out of range for a {arity}-set")
            }
            CanonError::NotCompleteUniform(why) => write!(f, "domain is not [G]^k: {why}"),
            CanonError::NotNashWilliams => f.write_str("domain is not Nash-Williams"),
            CanonError::LabelCount { members, labels } => {
                write!(f, "{labels} labels for {members} domain members")
            }
            CanonError::PreconditionViolated(why) => write!(f, "precondition violated: {why}"),
            CanonError::CapExceeded { cap } => write!(f, "no Ramsey number up to cap {cap}"),
            CanonError::SearchTooLarge { l, colorings_log2 } => {
                write!(f, "2^{colorings_log2} colorings at l={l} is beyond exhaustive reach")
            }
        }
    }
}

impl core::error::Error for CanonError {}

/// `π_I(a) = {a_i : i ∈ I}` for sorted `a` and strictly increasing `I`.
pub fn project_i(a: &[u32], indices: &[usize]) -> Result<Vec<u32>, CanonError> {
    indices
        .iter()
        .map(|&i| a.get(i).copied().ok_or(CanonError::ArityMismatch { arity: a.len(), index: i }))
        .collect()
}

/// An equivalence relation on a finite family, stored as one label per member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqRel {
    domain: FlatFamily,
    labels: Vec<u64>,
}

impl EqRel {
    /// `labels[i]` labels `domain.members()[i]`.
    pub fn new(domain: FlatFamily, labels: Vec<u64>) -> Result<Self, CanonError> {
        if labels.len() != domain.len() {
            return Err(CanonError::LabelCount { members: domain.len(), labels: labels.len() });
        }
        Ok(EqRel { domain, labels })
    }

    /// Labels assigned by a function of the member.
    pub fn from_fn(domain: FlatFamily, label: impl Fn(&[u32]) -> u64) -> Self {
        let labels = domain.members().iter().map(|a| label(a)).collect();
        EqRel { domain, labels }
    }

    pub fn domain(&self) -> &FlatFamily {
        &self.domain
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, a: &[u32]) -> Option<u64> {
        self.domain
            .members()
            .binary_search_by(|m| m.as_slice().cmp(a))
            .ok()
            .map(|i| self.labels[i])
    }

    /// `(member, label)` pairs for members inside `m`.
    fn restricted<'a>(&'a self, m: &[u32]) -> Vec<(&'a [u32], u64)> {
        self.domain
            .members()
            .iter()
            .zip(&self.labels)
            .filter(|(a, _)| is_subset_sorted(a, m))
            .map(|(a, &l)| (a.as_slice(), l))
            .collect()
    }

    /// The arity `k` when the domain is exactly `[0, ground)^k`.
    pub fn uniform_arity(&self) -> Result<usize, CanonError> {
        let members = self.domain.members();
        let k = members.first().map_or(0, Vec::len);
        let ground: Vec<u32> = (0..self.domain.ground()).collect();
        let expected = binomial(ground.len(), k);
        if members.iter().any(|a| a.len() != k) {
            return Err(CanonError::NotCompleteUniform(String::from("mixed member sizes")));
        }
        if members.len() as u128 != expected {
            return Err(CanonError::NotCompleteUniform(format!(
                "{} members, expected C({}, {k}) = {expected}",
                members.len(),
                ground.len()
            )));
        }
        Ok(k)
    }
}

/// Whether `key(a)` and the label determine each other on `pairs`.
pub(crate) fn induces_same_partition<K: Ord>(pairs: &[(&[u32], u64)], key: impl Fn(&[u32]) -> K) -> bool {
    let mut seen = BTreeSet::new();
    let mut backward: BTreeMap<K, u64> = BTreeMap::new();
    for &(a, l) in pairs {
        let k = key(a);
        if let Some(prev) = backward.get(&k) {
            if *prev != l {
                return false;
            }
        } else if !seen.insert(l) {
            return false;
        } else {
            backward.insert(k, l);
        }
    }
    true
}

/// Index sets of `{0..k-1}` by size, then lexicographically.
pub fn index_sets(k: usize) -> Vec<Vec<usize>> {
    (0..=k).flat_map(|s| (0..k).combinations(s)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErWitness {
    pub m: Vec<u32>,
    pub indices: Vec<usize>,
}

/// Least `(M, I)` with `E` equal to `E_I` on `[M]^k`.
pub fn er_canonize(rel: &EqRel, m: usize) -> Result<Option<ErWitness>, CanonError> {
    let k = rel.uniform_arity()?;
    if m < k {
        return Err(CanonError::PreconditionViolated("target size below arity"));
    }
    let ground: Vec<u32> = (0..rel.domain.ground()).collect();
    let candidates = index_sets(k);
    for msub in k_subsets(&ground, m) {
        if let Some(indices) = er_canonize_on(rel, &msub, &candidates) {
            return Ok(Some(ErWitness { m: msub, indices }));
        }
    }
    Ok(None)
}

fn er_canonize_on(rel: &EqRel, m: &[u32], candidates: &[Vec<usize>]) -> Option<Vec<usize>> {
    let pairs = rel.restricted(m);
    candidates
        .iter()
        .find(|idx| {
            induces_same_partition(&pairs, |a| project_i(a, idx).expect("uniform arity"))
        })
        .cloned()
}

/// A table `a ↦ φ(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IrreducibleMap {
    pub table: BTreeMap<Vec<u32>, Vec<u32>>,
}

impl IrreducibleMap {
    pub fn get(&self, a: &[u32]) -> Option<&Vec<u32>> {
        self.table.get(a)
    }

    pub fn images(&self) -> BTreeSet<&Vec<u32>> {
        self.table.values().collect()
    }
}

/// `φ(a) ⊆ a` everywhere and no image is a proper subset of another.
pub fn is_irreducible(phi: &IrreducibleMap) -> bool {
    let inside = phi.table.iter().all(|(a, x)| is_subset_sorted(x, a));
    let images = phi.images();
    inside
        && images
            .iter()
            .all(|x| images.iter().all(|y| x == y || !is_subset_sorted(x, y)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrWitness {
    pub m: Vec<u32>,
    pub phi: IrreducibleMap,
}

/// Least `M` of size `m` carrying an irreducible `φ` that canonizes `E` on
/// `B|M`. Projection-style maps (one index set per member size) are tried
/// before the general per-class search, which visits at most `budget` nodes
/// per `M`.
pub fn pr_canonize(rel: &EqRel, m: usize, budget: usize) -> Result<Option<PrWitness>, CanonError> {
    if !is_nash_williams(&rel.domain) {
        return Err(CanonError::NotNashWilliams);
    }
    let ground: Vec<u32> = (0..rel.domain.ground()).collect();
    for msub in k_subsets(&ground, m) {
        if let Some(phi) = pr_canonize_on(rel, &msub, budget) {
            return Ok(Some(PrWitness { m: msub, phi }));
        }
    }
    Ok(None)
}

/// Canonize on the fixed set `m`.
pub fn pr_canonize_on(rel: &EqRel, m: &[u32], budget: usize) -> Option<IrreducibleMap> {
    let pairs = rel.restricted(m);
    projection_map(&pairs).or_else(|| class_search(&pairs, budget))
}

fn table_of(pairs: &[(&[u32], u64)], phi: impl Fn(&[u32]) -> Vec<u32>) -> IrreducibleMap {
    IrreducibleMap { table: pairs.iter().map(|&(a, _)| (a.to_vec(), phi(a))).collect() }
}

fn projection_map(pairs: &[(&[u32], u64)]) -> Option<IrreducibleMap> {
    let sizes: Vec<usize> = pairs.iter().map(|(a, _)| a.len()).collect::<BTreeSet<_>>().into_iter().collect();
    let per_size: Vec<Vec<Vec<usize>>> = sizes.iter().map(|&s| index_sets(s)).collect();
    for choice in per_size.iter().map(|v| v.iter()).multi_cartesian_product() {
        let pick = |a: &[u32]| -> Vec<u32> {
            let slot = sizes.binary_search(&a.len()).expect("size present");
            project_i(a, choice[slot]).expect("index within size")
        };
        if induces_same_partition(pairs, pick) {
            let phi = table_of(pairs, pick);
            if is_irreducible(&phi) {
                return Some(phi);
            }
        }
    }
    if sizes.is_empty() {
        return Some(IrreducibleMap::default());
    }
    None
}

/// One image per class, drawn from the intersection of the class, with
/// distinct images pairwise ⊆-incomparable.
fn class_search(pairs: &[(&[u32], u64)], budget: usize) -> Option<IrreducibleMap> {
    let mut classes: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &(a, l) in pairs {
        classes
            .entry(l)
            .and_modify(|common| common.retain(|x| a.binary_search(x).is_ok()))
            .or_insert_with(|| a.to_vec());
    }
    let order: Vec<(u64, Vec<Vec<u32>>)> = classes
        .into_iter()
        .map(|(l, common)| {
            let options = (0..=common.len()).flat_map(|s| k_subsets(&common, s)).collect();
            (l, options)
        })
        .collect();

    fn go(
        order: &[(u64, Vec<Vec<u32>>)],
        chosen: &mut Vec<Vec<u32>>,
        nodes: &mut usize,
        budget: usize,
    ) -> bool {
        let Some((_, options)) = order.get(chosen.len()) else { return true };
        for x in options {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            let clash = chosen
                .iter()
                .any(|y| y == x || is_subset_sorted(x, y) || is_subset_sorted(y, x));
            if clash {
                continue;
            }
            chosen.push(x.clone());
            if go(order, chosen, nodes, budget) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::new();
    let mut nodes = 0;
    if !go(&order, &mut chosen, &mut nodes, budget) {
        return None;
    }
    let image: BTreeMap<u64, Vec<u32>> = order.iter().map(|(l, _)| *l).zip(chosen).collect();
    Some(IrreducibleMap {
        table: pairs.iter().map(|&(a, l)| (a.to_vec(), image[&l].clone())).collect(),
    })
}

/// Least `j`-subset of `{0..l-1}` on which `color` is constant over `r`-subsets.
pub fn ramsey_witness(l: u32, r: usize, color: impl Fn(&[u32]) -> u32, j: usize) -> Option<Vec<u32>> {
    if j > l as usize {
        return None;
    }

    fn go(
        l: u32,
        r: usize,
        j: usize,
        color: &dyn Fn(&[u32]) -> u32,
        set: &mut Vec<u32>,
        seen: Option<u32>,
    ) -> bool {
        if set.len() == j {
            return true;
        }
        let lo = set.last().map_or(0, |&x| x + 1);
        let need = (j - set.len()) as u32;
        for x in lo..l {
            if l - x < need {
                break;
            }
            let mut c = seen;
            let mut ok = true;
            if r == 0 {
                c = Some(color(&[]));
            } else if set.len() + 1 >= r {
                for mut sub in set.iter().copied().combinations(r - 1) {
                    sub.push(x);
                    let col = color(&sub);
                    match c {
                        None => c = Some(col),
                        Some(p) if p != col => {
                            ok = false;
                            break;
                        }
                        _ => {}
                    }
                }
            }
            if ok {
                set.push(x);
                if go(l, r, j, color, set, c) {
                    return true;
                }
                set.pop();
            }
        }
        false
    }

    let mut set = Vec::with_capacity(j);
    go(l, r, j, &color, &mut set, None).then_some(set)
}

/// Colorings are enumerated exhaustively only up to this many.
pub const MAX_COLORINGS_LOG2: u32 = 24;

/// Least `l <= cap` such that every `q`-coloring of `[l]^r` has a homogeneous
/// `j`-set, by exhaustion over colorings.
pub fn min_ramsey(j: usize, r: usize, q: u32, cap: u32) -> Result<u32, CanonError> {
    if q == 0 {
        return Err(CanonError::PreconditionViolated("need at least one color"));
    }
    for l in (j as u32)..=cap {
        if arrows(l, r, q, j)? {
            return Ok(l);
        }
    }
    Err(CanonError::CapExceeded { cap })
}

/// Whether every `q`-coloring of `[l]^r` has a homogeneous `j`-set.
pub fn arrows(l: u32, r: usize, q: u32, j: usize) -> Result<bool, CanonError> {
    let ground: Vec<u32> = (0..l).collect();
    let edges = k_subsets(&ground, r);
    let bits = (u32::BITS - (q - 1).leading_zeros()) * edges.len() as u32;
    if q > 1 && bits > MAX_COLORINGS_LOG2 {
        return Err(CanonError::SearchTooLarge { l, colorings_log2: bits });
    }
    let index: BTreeMap<&[u32], usize> = edges.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let mut digits = alloc::vec![0u32; edges.len()];
    loop {
        if ramsey_witness(l, r, |s| digits[index[s]], j).is_none() {
            return Ok(false);
        }
        // Mixed-radix increment.
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(true);
            }
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}
