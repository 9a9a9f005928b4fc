//! The space `R1` of height-two trees.
//!
//! `𝕋(n) = {⟨⟩, ⟨n⟩} ∪ {⟨n, i⟩ : i <= n}` and `𝕋` is the union of all `𝕋(n)`.
//! A member is a sequence of blocks: block `n` has one spine node `⟨k_n⟩` and
//! `n + 1` leaves `⟨k_n, i⟩` with `i ∈ I_n ⊆ {0..k_n}`, the spines strictly
//! increasing. `r_n` keeps the first `n` blocks and `≤_fin` is subtree inclusion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::canonize::ramsey_witness;
use crate::space::{SpaceBinding, SpaceError};
use crate::subsets::{is_subset_sorted, k_subsets, strictly_increasing};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct R1Block {
    /// Position of the block inside its member.
    pub index: usize,
    pub spine: u32,
    /// Sorted leaf coordinates `I`.
    pub leaves: Vec<u32>,
}

impl R1Block {
    pub fn new(index: usize, spine: u32, leaves: Vec<u32>) -> Self {
        R1Block { index, spine, leaves }
    }

    /// Subtree inclusion between blocks.
    pub fn is_subtree_of(&self, other: &R1Block) -> bool {
        self.spine == other.spine && is_subset_sorted(&self.leaves, &other.leaves)
    }

    /// Every block of `𝕋(k)` shape inside this one, placed at position `k`.
    pub fn sub_blocks(&self, k: usize) -> Vec<R1Block> {
        k_subsets(&self.leaves, k + 1)
            .into_iter()
            .map(|leaves| R1Block { index: k, spine: self.spine, leaves })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureClause {
    IndexMismatch,
    /// Rows and columns of a square block differ in size.
    SideMismatch,
    LeafCount,
    LeavesNotIncreasing,
    LeafAboveSpine,
    SpinesNotIncreasing,
}

impl fmt::Display for StructureClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureClause::IndexMismatch => "block index differs from position",
            StructureClause::SideMismatch => "rows and cols differ in size",
            StructureClause::LeafCount => "leaf count",
            StructureClause::LeavesNotIncreasing => "leaves not strictly increasing",
            StructureClause::LeafAboveSpine => "leaf above spine",
            StructureClause::SpinesNotIncreasing => "spines not increasing",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureError {
    pub position: usize,
    pub clause: StructureClause,
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "block {}: {}", self.position, self.clause)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Building `Y` block by block from Ramsey witnesses.
    BuildY,
    /// Thinning the recurring color class to `Z`.
    Thin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    Structure(StructureError),
    MaskArityMismatch { index: usize, leaf_slots: usize },
    /// `needed_depth` is a lower bound on the truncation that could succeed.
    InsufficientTruncation { stage: Stage, needed_depth: usize },
    PreconditionViolated(&'static str),
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::Structure(e) => write!(f, "structure error at {e}"),
            TreeError::MaskArityMismatch { index, leaf_slots } => {
                write!(f, "mask leaf index {index} but block has {leaf_slots} leaves")
            }
            TreeError::InsufficientTruncation { stage, needed_depth } => {
                write!(f, "truncation too shallow in stage {stage:?}; need depth >= {needed_depth}")
            }
            TreeError::PreconditionViolated(why) => write!(f, "precondition violated: {why}"),
        }
    }
}

impl core::error::Error for TreeError {}

impl From<StructureError> for TreeError {
    fn from(e: StructureError) -> Self {
        TreeError::Structure(e)
    }
}

/// Checks a block sequence against the `R1` shape rules, first failure wins.
pub fn validate_blocks(blocks: &[R1Block]) -> Result<(), StructureError> {
    let mut prev: Option<u32> = None;
    for (position, b) in blocks.iter().enumerate() {
        let fail = |clause| Err(StructureError { position, clause });
        if b.index != position {
            return fail(StructureClause::IndexMismatch);
        }
        if b.leaves.len() != position + 1 {
            return fail(StructureClause::LeafCount);
        }
        if !strictly_increasing(&b.leaves) {
            return fail(StructureClause::LeavesNotIncreasing);
        }
        if b.leaves.last().is_some_and(|&i| i > b.spine) {
            return fail(StructureClause::LeafAboveSpine);
        }
        if prev.is_some_and(|p| p >= b.spine) {
            return fail(StructureClause::SpinesNotIncreasing);
        }
        prev = Some(b.spine);
    }
    Ok(())
}

/// A truncated member of `R1`; also the approximation type of the space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct R1Member {
    pub blocks: Vec<R1Block>,
}

impl R1Member {
    /// Builds from `(spine, leaves)` pairs, numbering blocks by position.
    pub fn from_parts(parts: Vec<(u32, Vec<u32>)>) -> Self {
        R1Member {
            blocks: parts
                .into_iter()
                .enumerate()
                .map(|(index, (spine, leaves))| R1Block { index, spine, leaves })
                .collect(),
        }
    }

    /// `r_depth(𝕋)`: block `n` is `𝕋(n)` itself.
    pub fn identity(depth: usize) -> Self {
        R1Member::from_parts((0..depth as u32).map(|n| (n, (0..=n).collect())).collect())
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    pub fn last_spine(&self) -> Option<u32> {
        self.blocks.last().map(|b| b.spine)
    }

    pub fn prefix(&self, n: usize) -> R1Member {
        R1Member { blocks: self.blocks[..n.min(self.blocks.len())].to_vec() }
    }

    /// The block of `self` sharing a spine with `b`, if any.
    pub fn block_with_spine(&self, spine: u32) -> Option<&R1Block> {
        self.blocks
            .binary_search_by(|x| x.spine.cmp(&spine))
            .ok()
            .map(|i| &self.blocks[i])
    }

    /// Subtree inclusion: every block of `self` inside a block of `other`.
    pub fn is_subtree_of(&self, other: &R1Member) -> bool {
        self.blocks
            .iter()
            .all(|b| other.block_with_spine(b.spine).is_some_and(|o| b.is_subtree_of(o)))
    }
}

pub fn validate_member(m: &R1Member) -> Result<(), StructureError> {
    validate_blocks(&m.blocks)
}

/// A subtree of `𝕋(n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubtreeMask {
    Root,
    RootSpine,
    /// Root, spine and the leaves with indices in the nonempty set `J`.
    RootSpineLeaves(Vec<usize>),
}

impl SubtreeMask {
    pub fn leaf_indices(&self) -> &[usize] {
        match self {
            SubtreeMask::RootSpineLeaves(j) => j,
            _ => &[],
        }
    }
}

/// All `2^{n+1} + 1` subtrees of `𝕋(n)`: `Root`, `RootSpine`, then the leaf
/// masks by size and lexicographically.
pub fn enumerate_subtrees(n: usize) -> Vec<SubtreeMask> {
    let idx: Vec<usize> = (0..=n).collect();
    let mut out = alloc::vec![SubtreeMask::Root, SubtreeMask::RootSpine];
    for s in 1..=n + 1 {
        out.extend(k_subsets(&idx, s).into_iter().map(SubtreeMask::RootSpineLeaves));
    }
    out
}

/// A node of `𝕋` or `𝕋²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeNode {
    Root,
    Spine(u32),
    Leaf(u32, u32),
    Cell(u32, u32, u32),
}

pub type ProjectedTree = BTreeSet<TreeNode>;

/// `π_T`: mask leaf `j` selects the `j`-th smallest leaf of the block.
pub fn pi_t(b: &R1Block, t: &SubtreeMask) -> Result<ProjectedTree, TreeError> {
    let mut out = ProjectedTree::new();
    out.insert(TreeNode::Root);
    if *t == SubtreeMask::Root {
        return Ok(out);
    }
    out.insert(TreeNode::Spine(b.spine));
    for &j in t.leaf_indices() {
        let i = b
            .leaves
            .get(j)
            .ok_or(TreeError::MaskArityMismatch { index: j, leaf_slots: b.leaves.len() })?;
        out.insert(TreeNode::Leaf(b.spine, *i));
    }
    Ok(out)
}

/// `a E_T b` iff `π_T(a) = π_T(b)`.
pub fn eq_et(a: &R1Block, b: &R1Block, t: &SubtreeMask) -> Result<bool, TreeError> {
    Ok(pi_t(a, t)? == pi_t(b, t)?)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct R1;

impl SpaceBinding for R1 {
    type Approx = R1Member;

    fn tag(&self) -> &'static str {
        "r1"
    }

    fn validate(&self, a: &R1Member) -> Result<(), SpaceError> {
        validate_member(a).map_err(|e| SpaceError::ApproximationFromWrongSpace(format!("{e}")))
    }

    fn length(&self, a: &R1Member) -> usize {
        a.depth()
    }

    fn restrict(&self, a: &R1Member, n: usize) -> R1Member {
        a.prefix(n)
    }

    fn le_fin(&self, a: &R1Member, b: &R1Member) -> bool {
        a.is_subtree_of(b)
    }

    fn one_step(&self, a: &R1Member, within: &R1Member) -> Vec<R1Member> {
        let n = a.depth();
        let floor = a.last_spine();
        let mut out = Vec::new();
        for w in within.blocks.iter().filter(|w| floor.is_none_or(|s| w.spine > s)) {
            for leaves in k_subsets(&w.leaves, n + 1) {
                let mut next = a.clone();
                next.blocks.push(R1Block { index: n, spine: w.spine, leaves });
                out.push(next);
            }
        }
        out
    }

    fn below(&self, b: &R1Member) -> Vec<R1Member> {
        fn go(b: &R1Member, from: usize, cur: &mut R1Member, out: &mut Vec<R1Member>) {
            out.push(cur.clone());
            let n = cur.depth();
            for p in from..b.depth() {
                for leaves in k_subsets(&b.blocks[p].leaves, n + 1) {
                    cur.blocks.push(R1Block { index: n, spine: b.blocks[p].spine, leaves });
                    go(b, p + 1, cur, out);
                    cur.blocks.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(b, 0, &mut R1Member::default(), &mut out);
        out
    }

    fn within_horizon(&self, c: &R1Member, x: &R1Member) -> bool {
        match (c.last_spine(), x.last_spine()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(sc), Some(sx)) => sc <= sx,
        }
    }
}

/// Result of the two-stage pigeonhole construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A4Construction {
    pub z: R1Member,
    /// Color of `f` on every position-`k` block inside `Z` beyond `m`.
    pub color: u32,
    /// For each color, how many consecutive positions `m, m+1, ...` admit a
    /// block of `X` homogeneous in that color.
    pub recurrence: BTreeMap<u32, usize>,
    /// Positions in `X` that the blocks `Y(m), Y(m+1), ...` were taken from.
    pub y_sources: Vec<usize>,
}

/// Least `size`-subset of `src.leaves` whose position-`k` sub-blocks all have
/// color `color`.
fn homogeneous_leaves(
    src: &R1Block,
    k: usize,
    f: &impl Fn(&R1Block) -> u32,
    size: usize,
    color: u32,
) -> Option<Vec<u32>> {
    fn go(
        src: &R1Block,
        k: usize,
        f: &impl Fn(&R1Block) -> u32,
        size: usize,
        color: u32,
        from: usize,
        cur: &mut Vec<u32>,
    ) -> bool {
        if cur.len() == size {
            return true;
        }
        for p in from..src.leaves.len() {
            if src.leaves.len() - p < size - cur.len() {
                break;
            }
            let x = src.leaves[p];
            let fits = cur.len() < k
                || k_subsets(cur, k).into_iter().all(|mut t| {
                    t.push(x);
                    f(&R1Block { index: k, spine: src.spine, leaves: t }) == color
                });
            if fits {
                cur.push(x);
                if go(src, k, f, size, color, p + 1, cur) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let mut cur = Vec::with_capacity(size);
    go(src, k, f, size, color, 0, &mut cur).then_some(cur)
}

/// Builds `Z ∈ [r_m(X), X]` of depth `target_depth` with `f` constant on the
/// position-`k` blocks inside `Z(i)` for `i >= m`.
///
/// Stage one takes, for each `j >= m`, the next block of `X` that has a
/// `(j+1)`-subset of leaves on which `f` is homogeneous. Stage two fixes a
/// color: for each color it places the earliest admissible block of `X` at
/// positions `m, m+1, ...` in turn, thinned to a homogeneous set of `i + 1`
/// leaves, and keeps the color whose chain recurs longest (ties go to the
/// smaller color). A homogeneous set stays homogeneous under thinning, so the
/// greedy chain is as long as any, and the construction succeeds exactly
/// when some `Z` of the target depth exists inside `X`.
pub fn a4_r1_construct(
    x: &R1Member,
    k: usize,
    f: impl Fn(&R1Block) -> u32,
    m: usize,
    target_depth: usize,
) -> Result<A4Construction, TreeError> {
    validate_member(x)?;
    if m < k {
        return Err(TreeError::PreconditionViolated("m must be at least k"));
    }
    if target_depth < m {
        return Err(TreeError::PreconditionViolated("target depth below m"));
    }
    if x.depth() < m {
        return Err(TreeError::InsufficientTruncation { stage: Stage::BuildY, needed_depth: m });
    }

    // Stage one.
    let mut y_sources = Vec::new();
    for p in m..x.depth() {
        let j = m + y_sources.len();
        let src = &x.blocks[p];
        let color_of = |idx: &[u32]| {
            let leaves = idx.iter().map(|&i| src.leaves[i as usize]).collect();
            f(&R1Block { index: k, spine: src.spine, leaves })
        };
        if ramsey_witness(src.leaves.len() as u32, k + 1, color_of, j + 1).is_some() {
            y_sources.push(p);
        }
    }
    let need = target_depth - m;
    if y_sources.len() < need {
        return Err(TreeError::InsufficientTruncation {
            stage: Stage::BuildY,
            needed_depth: x.depth() + (need - y_sources.len()),
        });
    }

    // Stage two.
    let colors: BTreeSet<u32> = x.blocks[m..].iter().flat_map(|b| b.sub_blocks(k)).map(|c| f(&c)).collect();
    let mut recurrence = BTreeMap::new();
    let mut best: Option<(u32, Vec<R1Block>)> = None;
    for &color in &colors {
        let mut chain: Vec<R1Block> = Vec::new();
        for src in &x.blocks[m..] {
            let i = m + chain.len();
            if let Some(leaves) = homogeneous_leaves(src, k, &f, i + 1, color) {
                chain.push(R1Block { index: i, spine: src.spine, leaves });
            }
        }
        recurrence.insert(color, chain.len());
        if best.as_ref().is_none_or(|(_, b)| chain.len() > b.len()) {
            best = Some((color, chain));
        }
    }
    let (color, chain) = best.unwrap_or((0, Vec::new()));
    if chain.len() < need {
        return Err(TreeError::InsufficientTruncation {
            stage: Stage::Thin,
            needed_depth: x.depth() + (need - chain.len()),
        });
    }

    let mut z = x.prefix(m);
    z.blocks.extend(chain.into_iter().take(need));
    Ok(A4Construction { z, color, recurrence, y_sources })
}

/// Colors `f` takes on position-`k` blocks inside `Z(i)` for `i >= m`.
pub fn colors_beyond(z: &R1Member, k: usize, f: impl Fn(&R1Block) -> u32, m: usize) -> BTreeSet<u32> {
    z.blocks.iter().skip(m).flat_map(|b| b.sub_blocks(k)).map(|c| f(&c)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum R1Almost {
    /// Every checkable `Y(n)`, `n >= m`, lies inside a block of `X`.
    Holds(usize),
    FailsUpToDepth(usize),
}

/// Truncated `Y ≤* X` for `R1`. Blocks of `Y` past the last spine of `X` are
/// beyond the truncation and are not checked.
pub fn r1_almost_reduces(y: &R1Member, x: &R1Member) -> R1Almost {
    let horizon = x.last_spine();
    let mut start = 0;
    let mut witnessed = false;
    for (n, b) in y.blocks.iter().enumerate() {
        if horizon.is_none_or(|h| b.spine > h) {
            continue;
        }
        if x.block_with_spine(b.spine).is_some_and(|o| b.is_subtree_of(o)) {
            witnessed = true;
        } else {
            start = n + 1;
            witnessed = false;
        }
    }
    if witnessed {
        R1Almost::Holds(start)
    } else {
        R1Almost::FailsUpToDepth(y.depth())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{check_a4, A4Outcome, SearchOptions, TruncatedMember};
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn validation_examples() {
        assert_eq!(validate_member(&R1Member::identity(8)), Ok(()));
        let same_spine = R1Member::from_parts(vec![(3, vec![0]), (3, vec![0, 1])]);
        assert_eq!(
            validate_member(&same_spine),
            Err(StructureError { position: 1, clause: StructureClause::SpinesNotIncreasing })
        );
        let short = R1Member::from_parts(vec![(0, vec![0]), (2, vec![1])]);
        assert_eq!(
            validate_member(&short),
            Err(StructureError { position: 1, clause: StructureClause::LeafCount })
        );
        let high = R1Member::from_parts(vec![(1, vec![2])]);
        assert_eq!(validate_member(&high).unwrap_err().clause, StructureClause::LeafAboveSpine);
    }

    #[test]
    fn subtree_counts() {
        assert_eq!(enumerate_subtrees(0).len(), 3);
        assert_eq!(enumerate_subtrees(1).len(), 5);
        assert_eq!(enumerate_subtrees(3).len(), 17);
        for n in 0..=10 {
            assert_eq!(enumerate_subtrees(n).len(), (1 << (n + 1)) + 1);
        }
    }

    #[test]
    fn projection_examples() {
        let a = R1Block::new(0, 3, vec![0]);
        let b = R1Block::new(0, 3, vec![2]);
        let c = R1Block::new(0, 4, vec![0]);
        let t = SubtreeMask::RootSpine;
        assert_eq!(
            pi_t(&a, &t).unwrap(),
            [TreeNode::Root, TreeNode::Spine(3)].into_iter().collect::<ProjectedTree>()
        );
        assert!(eq_et(&a, &b, &t).unwrap());
        assert!(!eq_et(&a, &c, &t).unwrap());
        assert!(eq_et(&a, &c, &SubtreeMask::Root).unwrap());
        assert!(!eq_et(&a, &b, &SubtreeMask::RootSpineLeaves(vec![0])).unwrap());
        assert_eq!(
            pi_t(&a, &SubtreeMask::RootSpineLeaves(vec![1])),
            Err(TreeError::MaskArityMismatch { index: 1, leaf_slots: 1 })
        );
        let d = R1Block::new(2, 7, vec![1, 4, 6]);
        assert_eq!(
            pi_t(&d, &SubtreeMask::RootSpineLeaves(vec![0, 2])).unwrap(),
            [TreeNode::Root, TreeNode::Spine(7), TreeNode::Leaf(7, 1), TreeNode::Leaf(7, 6)]
                .into_iter()
                .collect::<ProjectedTree>()
        );
    }

    #[test]
    fn constant_coloring_returns_x() {
        let x = R1Member::identity(7);
        let out = a4_r1_construct(&x, 1, |_| 1, 2, 7).unwrap();
        assert_eq!(out.z, x);
        assert_eq!(out.color, 1);
    }

    #[test]
    fn spine_parity_k0() {
        let x = R1Member::identity(12);
        let parity = |b: &R1Block| b.spine % 2;
        let out = a4_r1_construct(&x, 0, parity, 1, 6).unwrap();
        assert_eq!(out.z.prefix(1), x.prefix(1));
        assert!(out.z.is_subtree_of(&x));
        assert_eq!(validate_member(&out.z), Ok(()));
        let spines: BTreeSet<u32> = out.z.blocks[1..].iter().map(|b| b.spine % 2).collect();
        assert_eq!(spines.len(), 1);
        assert_eq!(colors_beyond(&out.z, 0, parity, 1).len(), 1);
        assert_eq!(out.recurrence.values().sum::<usize>(), 11);
    }

    #[test]
    fn adversarial_k1_runs_out() {
        // Pentagon-style on leaf pairs: no homogeneous triple among five leaves.
        let x = R1Member::identity(8);
        let f = |b: &R1Block| u32::from((b.leaves[1] - b.leaves[0]) % 5 == 1 || (b.leaves[1] - b.leaves[0]) % 5 == 4);
        match a4_r1_construct(&x, 1, f, 2, 8) {
            Err(TreeError::InsufficientTruncation { needed_depth, .. }) => assert!(needed_depth > 8),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            a4_r1_construct(&x, 3, f, 2, 4),
            Err(TreeError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn almost_reduction_examples() {
        let x = R1Member::from_parts((0..6).map(|n| (2 * n + 1, (0..=n).collect())).collect());
        assert_eq!(r1_almost_reduces(&x, &x), R1Almost::Holds(0));
        let mut foreign = x.clone();
        foreign.blocks[0] = R1Block::new(0, 0, vec![0]);
        assert_eq!(validate_member(&foreign), Ok(()));
        assert_eq!(r1_almost_reduces(&foreign, &x), R1Almost::Holds(1));
        let evens = R1Member::from_parts((0..6).map(|n| (2 * n, (0..=n).collect())).collect());
        assert_eq!(r1_almost_reduces(&evens, &x), R1Almost::FailsUpToDepth(6));
        let y = R1Member::from_parts(vec![(0, vec![0]), (1, vec![0, 1]), (5, vec![0, 1, 2])]);
        let w = R1Member::from_parts(vec![(0, vec![0]), (2, vec![0, 1]), (5, vec![0, 1, 2])]);
        assert_eq!(r1_almost_reduces(&y, &w), R1Almost::Holds(2));
    }

    fn hashed(seed: u64) -> impl Fn(&R1Block) -> u32 {
        move |b: &R1Block| {
            let h = b.leaves.iter().fold(seed ^ u64::from(b.spine).wrapping_mul(0x9e37_79b9_7f4a_7c15), |h, &i| {
                (h ^ u64::from(i)).wrapping_mul(0x0100_0000_01b3).rotate_left(17)
            });
            (h >> 33) as u32 & 1
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn construct_self_validates(seed in any::<u64>(), k in 0usize..2, extra in 0usize..2, t in 0usize..3) {
            let x = R1Member::identity(9);
            let f = hashed(seed);
            let m = k + extra;
            if let Ok(out) = a4_r1_construct(&x, k, &f, m, m + t) {
                prop_assert_eq!(validate_member(&out.z), Ok(()));
                prop_assert_eq!(out.z.prefix(m), x.prefix(m));
                prop_assert!(out.z.is_subtree_of(&x));
                prop_assert!(colors_beyond(&out.z, k, &f, m).len() <= 1);
            }
        }

        #[test]
        fn construct_matches_search(seed in any::<u64>(), k in 0usize..2) {
            let x = R1Member::identity(8);
            let f = hashed(seed);
            let m = k;
            let a = x.prefix(k);
            let b = TruncatedMember::new(&R1, x.clone()).unwrap();
            for target in m + 1..=m + 3 {
                let built = a4_r1_construct(&x, k, &f, m, target).is_ok();
                let opts = SearchOptions { budget: 200_000, min_depth: Some(target) };
                let out = check_a4(&R1, &a, &b, |c: &R1Member| f(&c.blocks[k]) == 1, opts).unwrap();
                let exhausted = matches!(out, A4Outcome::NotFoundWithinTruncation { budget_exhausted: true, .. });
                prop_assert!(!exhausted);
                prop_assert_eq!(built, matches!(out, A4Outcome::Witness(_)), "target {}", target);
            }
        }

        #[test]
        fn eq_et_is_equivalence(
            spines in proptest::collection::vec(2u32..5, 3),
            picks in proptest::collection::vec(proptest::collection::btree_set(0u32..5, 2), 3),
        ) {
            let blocks: Vec<R1Block> = spines
                .iter()
                .zip(&picks)
                .map(|(&s, p)| R1Block::new(1, s, p.iter().map(|&i| i.min(s)).collect::<BTreeSet<_>>().into_iter().collect()))
                .filter(|b| b.leaves.len() == 2)
                .collect();
            for t in enumerate_subtrees(1) {
                for a in &blocks {
                    prop_assert!(eq_et(a, a, &t).unwrap());
                    for b in &blocks {
                        prop_assert_eq!(eq_et(a, b, &t).unwrap(), eq_et(b, a, &t).unwrap());
                        for c in &blocks {
                            if eq_et(a, b, &t).unwrap() && eq_et(b, c, &t).unwrap() {
                                prop_assert!(eq_et(a, c, &t).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }
}
