//! The Ellentuck space `[ω]^ω` and the finite theory of fronts and barriers.
//!
//! Members are infinite sets of naturals; `r_n(X)` is the set of the first `n`
//! elements and `≤_fin` is inclusion. Basic open sets are `[a, X] = {Y : a ⊏ Y ⊆ X}`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::space::{SpaceBinding, SpaceError, TruncatedMember};
use crate::subsets::{all_subsets, is_subset_sorted, k_subsets, strictly_increasing};

/// A finite approximation: a strictly increasing list of naturals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EllApprox(pub Vec<u32>);

impl EllApprox {
    pub fn new(elements: Vec<u32>) -> Result<Self, SpaceError> {
        let a = EllApprox(elements);
        Ellentuck.validate(&a)?;
        Ok(a)
    }

    pub fn empty() -> Self {
        EllApprox(Vec::new())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn max(&self) -> Option<u32> {
        self.0.last().copied()
    }
}

impl From<&[u32]> for EllApprox {
    fn from(xs: &[u32]) -> Self {
        EllApprox(xs.to_vec())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Ellentuck;

impl Ellentuck {
    /// Truncated member with top `elements`.
    pub fn member(&self, elements: &[u32]) -> Result<TruncatedMember<EllApprox>, SpaceError> {
        TruncatedMember::new(self, EllApprox(elements.to_vec()))
    }

    /// Every truncation drawn from `[0, ground)` with depth `1..=max_depth`,
    /// by size then lexicographically.
    pub fn all_truncations(&self, ground: u32, max_depth: usize) -> Vec<TruncatedMember<EllApprox>> {
        let items: Vec<u32> = (0..ground).collect();
        (1..=max_depth.min(items.len()))
            .flat_map(|k| k_subsets(&items, k))
            .map(|s| TruncatedMember::unchecked(self, EllApprox(s)))
            .collect()
    }
}

impl SpaceBinding for Ellentuck {
    type Approx = EllApprox;

    fn tag(&self) -> &'static str {
        "ellentuck"
    }

    fn validate(&self, a: &EllApprox) -> Result<(), SpaceError> {
        if strictly_increasing(&a.0) {
            Ok(())
        } else {
            Err(SpaceError::ApproximationFromWrongSpace(format!(
                "{:?} is not strictly increasing",
                a.0
            )))
        }
    }

    fn length(&self, a: &EllApprox) -> usize {
        a.0.len()
    }

    fn restrict(&self, a: &EllApprox, n: usize) -> EllApprox {
        EllApprox(a.0[..n.min(a.0.len())].to_vec())
    }

    fn le_fin(&self, a: &EllApprox, b: &EllApprox) -> bool {
        is_subset_sorted(&a.0, &b.0)
    }

    fn one_step(&self, a: &EllApprox, within: &EllApprox) -> Vec<EllApprox> {
        let floor = a.max();
        within
            .0
            .iter()
            .filter(|&&x| floor.is_none_or(|m| x > m))
            .map(|&x| {
                let mut next = a.0.clone();
                next.push(x);
                EllApprox(next)
            })
            .collect()
    }

    fn below(&self, b: &EllApprox) -> Vec<EllApprox> {
        all_subsets(&b.0).into_iter().map(EllApprox).collect()
    }

    fn within_horizon(&self, b: &EllApprox, x: &EllApprox) -> bool {
        match (b.max(), x.max()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(mb), Some(mx)) => mb <= mx,
        }
    }
}

/// Ordinal `ω·omegas + finite`, enough for the ranks of the descriptors below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank {
    pub omegas: u32,
    pub finite: u32,
}

impl Rank {
    pub const fn finite(n: u32) -> Self {
        Rank { omegas: 0, finite: n }
    }

    pub const OMEGA: Rank = Rank { omegas: 1, finite: 0 };

    fn succ(self) -> Self {
        Rank { omegas: self.omegas, finite: self.finite + 1 }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.omegas, self.finite) {
            (0, n) => write!(f, "{n}"),
            (1, 0) => f.write_str("ω"),
            (1, n) => write!(f, "ω+{n}"),
            (k, 0) => write!(f, "ω·{k}"),
            (k, n) => write!(f, "ω·{k}+{n}"),
        }
    }
}

/// Rank-recursive description of a uniform barrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BarrierDescriptor {
    /// `[ω]^k`.
    Uniform(u32),
    /// `{{n} ∪ a : a ∈ B_n}` where `B_n` lives above `n`.
    NodeIndexed {
        explicit: BTreeMap<u32, BarrierDescriptor>,
        tail: TailRule,
    },
}

/// How `B_n` is chosen for indices without an explicit entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailRule {
    Constant(Box<BarrierDescriptor>),
    /// `B_n = [ω]^n`, which yields the Schreier barrier.
    UniformOfIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BarrierError {
    /// Nothing of the barrier fits inside `[0, ground)`.
    RankTooLargeForGround { ground: u32 },
    /// Child ranks are neither constant nor strictly increasing.
    IrregularRanks(String),
    InvalidFamily(String),
    ColoringLength { members: usize, colors: usize },
    EmptyGround,
}

impl fmt::Display for BarrierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarrierError::RankTooLargeForGround { ground } => {
                write!(f, "no member of the barrier fits inside [0, {ground})")
            }
            BarrierError::IrregularRanks(why) => write!(f, "irregular child ranks: {why}"),
            BarrierError::InvalidFamily(why) => write!(f, "invalid family: {why}"),
            BarrierError::ColoringLength { members, colors } => {
                write!(f, "coloring has {colors} entries for {members} members")
            }
            BarrierError::EmptyGround => f.write_str("ground must be nonempty"),
        }
    }
}

impl core::error::Error for BarrierError {}

impl BarrierDescriptor {
    pub fn child(&self, n: u32) -> Option<BarrierDescriptor> {
        match self {
            BarrierDescriptor::Uniform(_) => None,
            BarrierDescriptor::NodeIndexed { explicit, tail } => Some(match explicit.get(&n) {
                Some(d) => d.clone(),
                None => match tail {
                    TailRule::Constant(d) => (**d).clone(),
                    TailRule::UniformOfIndex => BarrierDescriptor::Uniform(n),
                },
            }),
        }
    }

    /// `sup {rank(B_n) + 1}`, after checking the child ranks are constant or
    /// strictly increasing.
    pub fn rank(&self) -> Result<Rank, BarrierError> {
        match self {
            BarrierDescriptor::Uniform(k) => Ok(Rank::finite(*k)),
            BarrierDescriptor::NodeIndexed { explicit, tail } => {
                let horizon = explicit.keys().next_back().map_or(0, |&k| k + 1);
                let ranks = (0..=horizon)
                    .map(|n| self.child(n).expect("node-indexed").rank())
                    .collect::<Result<Vec<_>, _>>()?;
                let constant = ranks.windows(2).all(|w| w[0] == w[1]);
                let increasing = ranks.windows(2).all(|w| w[0] < w[1]);
                match tail {
                    TailRule::Constant(_) if constant => Ok(ranks[0].succ()),
                    TailRule::UniformOfIndex if increasing => {
                        let top = ranks.iter().map(|r| r.omegas).max().unwrap_or(0);
                        if top > 0 {
                            return Err(BarrierError::IrregularRanks(String::from(
                                "infinite child rank before finite tail",
                            )));
                        }
                        Ok(Rank::OMEGA)
                    }
                    _ => Err(BarrierError::IrregularRanks(format!("{ranks:?}"))),
                }
            }
        }
    }
}

/// The Schreier barrier `{a : |a| = min(a) + 1}`.
pub fn make_schreier() -> BarrierDescriptor {
    BarrierDescriptor::NodeIndexed { explicit: BTreeMap::new(), tail: TailRule::UniformOfIndex }
}

/// A finite family of finite subsets of `[0, ground)`, sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlatFamily {
    ground: u32,
    members: Vec<Vec<u32>>,
}

impl FlatFamily {
    pub fn new(ground: u32, mut members: Vec<Vec<u32>>) -> Result<Self, BarrierError> {
        for m in &mut members {
            m.sort_unstable();
            if m.windows(2).any(|w| w[0] == w[1]) {
                return Err(BarrierError::InvalidFamily(format!("{m:?} repeats an element")));
            }
            if m.last().is_some_and(|&x| x >= ground) {
                return Err(BarrierError::InvalidFamily(format!("{m:?} leaves [0, {ground})")));
            }
        }
        members.sort();
        members.dedup();
        Ok(FlatFamily { ground, members })
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: &[u32]) -> bool {
        self.members.binary_search_by(|m| m.as_slice().cmp(a)).is_ok()
    }

    /// Members contained in `m` (sorted).
    pub fn restrict_to(&self, m: &[u32]) -> Vec<&Vec<u32>> {
        self.members.iter().filter(|a| is_subset_sorted(a, m)).collect()
    }
}

/// Members of `d` inside `[0, ground)`.
pub fn flatten(d: &BarrierDescriptor, ground: u32) -> Result<FlatFamily, BarrierError> {
    if ground == 0 {
        return Err(BarrierError::EmptyGround);
    }
    let mut members = Vec::new();
    flatten_from(d, 0, ground, &mut Vec::new(), &mut members);
    if members.is_empty() {
        return Err(BarrierError::RankTooLargeForGround { ground });
    }
    FlatFamily::new(ground, members)
}

fn flatten_from(
    d: &BarrierDescriptor,
    lo: u32,
    ground: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    match d {
        BarrierDescriptor::Uniform(k) => {
            let items: Vec<u32> = (lo..ground).collect();
            for s in k_subsets(&items, *k as usize) {
                let mut m = prefix.clone();
                m.extend(s);
                out.push(m);
            }
        }
        BarrierDescriptor::NodeIndexed { .. } => {
            for n in lo..ground {
                let child = d.child(n).expect("node-indexed");
                prefix.push(n);
                flatten_from(&child, n + 1, ground, prefix, out);
                prefix.pop();
            }
        }
    }
}

/// No member is a proper initial segment of another.
pub fn is_nash_williams(f: &FlatFamily) -> bool {
    let ms = &f.members;
    ms.iter().all(|a| ms.iter().all(|b| !(a.len() < b.len() && b.starts_with(a))))
}

/// No member is a proper subset of another.
pub fn is_sperner(f: &FlatFamily) -> bool {
    let ms = &f.members;
    ms.iter().all(|a| ms.iter().all(|b| !(a.len() < b.len() && is_subset_sorted(a, b))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coverage {
    Covered,
    /// Lexicographically least maximal path that avoids every member and is
    /// longer than every member.
    Counterexample(Vec<u32>),
    /// Every avoiding path is too short to be decided inside the ground.
    Indeterminate,
}

/// Front coverage at ground `[0, ground)`.
///
/// A maximal path is a strictly increasing sequence ending at `ground - 1`. It
/// is covered when one of its initial segments is a member. An uncovered path
/// longer than every member is a genuine violation, since no later extension
/// can produce a member as an initial segment; shorter uncovered paths only
/// ran out of ground.
pub fn front_coverage(f: &FlatFamily, ground: u32) -> Coverage {
    if ground == 0 || f.contains(&[]) {
        return Coverage::Covered;
    }
    let longest = f.members.iter().map(Vec::len).max().unwrap_or(0);
    let mut undecided = false;
    let mut path = Vec::new();
    for start in 0..ground {
        if let Some(p) = coverage_walk(f, ground, start, &mut path, longest, &mut undecided) {
            return Coverage::Counterexample(p);
        }
    }
    if undecided {
        Coverage::Indeterminate
    } else {
        Coverage::Covered
    }
}

fn coverage_walk(
    f: &FlatFamily,
    ground: u32,
    next: u32,
    path: &mut Vec<u32>,
    longest: usize,
    undecided: &mut bool,
) -> Option<Vec<u32>> {
    path.push(next);
    let mut found = None;
    if !f.contains(path) {
        if next + 1 == ground {
            if path.len() > longest {
                found = Some(path.clone());
            } else {
                *undecided = true;
            }
        } else {
            for x in next + 1..ground {
                found = coverage_walk(f, ground, x, path, longest, undecided);
                if found.is_some() {
                    break;
                }
            }
        }
    }
    path.pop();
    found
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogenized {
    /// `set` is the lexicographically least `m`-subset on which every member
    /// of the family has color `color`.
    Found { set: Vec<u32>, color: u32 },
    NotFoundWithinGround { budget_exhausted: bool },
}

/// Exhaustive search for an `m`-subset `M ⊆ [0, ground)` such that the members
/// of `f` inside `M` share one color. `colors[i]` colors `f.members()[i]`.
/// When no member fits inside `M` the reported color is 0.
pub fn homogenize(
    f: &FlatFamily,
    colors: &[u32],
    m: usize,
    budget: usize,
) -> Result<Homogenized, BarrierError> {
    if colors.len() != f.len() {
        return Err(BarrierError::ColoringLength { members: f.len(), colors: colors.len() });
    }
    // Members grouped by their largest element; the empty member is checked once.
    let mut by_max: BTreeMap<u32, Vec<(&[u32], u32)>> = BTreeMap::new();
    let mut base: Option<u32> = None;
    for (a, &c) in f.members.iter().zip(colors) {
        match a.last() {
            Some(&x) => by_max.entry(x).or_default().push((a.as_slice(), c)),
            None => base = Some(c),
        }
    }

    struct Search<'a> {
        by_max: &'a BTreeMap<u32, Vec<(&'a [u32], u32)>>,
        ground: u32,
        m: usize,
        budget: usize,
        nodes: usize,
    }

    impl Search<'_> {
        fn go(&mut self, set: &mut Vec<u32>, color: Option<u32>) -> Result<Option<u32>, ()> {
            if set.len() == self.m {
                return Ok(Some(color.unwrap_or(0)));
            }
            let lo = set.last().map_or(0, |&x| x + 1);
            let room = (self.m - set.len()) as u32;
            for x in lo..self.ground {
                if self.ground - x < room {
                    break;
                }
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(());
                }
                set.push(x);
                let mut c = color;
                let mut ok = true;
                for &(a, ac) in self.by_max.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                    if is_subset_sorted(a, set) {
                        match c {
                            None => c = Some(ac),
                            Some(prev) if prev != ac => {
                                ok = false;
                                break;
                            }
                            _ => {}
                        }
                    }
                }
                if ok {
                    if let Some(found) = self.go(set, c)? {
                        return Ok(Some(found));
                    }
                }
                set.pop();
            }
            Ok(None)
        }
    }

    let mut search = Search { by_max: &by_max, ground: f.ground, m, budget, nodes: 0 };
    let mut set = Vec::new();
    Ok(match search.go(&mut set, base) {
        Ok(Some(color)) => Homogenized::Found { set, color },
        Ok(None) => Homogenized::NotFoundWithinGround { budget_exhausted: false },
        Err(()) => Homogenized::NotFoundWithinGround { budget_exhausted: true },
    })
}
