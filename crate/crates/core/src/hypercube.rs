//! The space `H2` of square blocks, with a thin `H^k` generalization.
//!
//! Block `n` of a member is `{⟨⟩, ⟨k_n⟩} ∪ {⟨k_n, ⟨i, j⟩⟩ : i ∈ I_n, j ∈ J_n}`
//! with `I_n, J_n` of size `n + 1` below `k_n + 1`. Canonical equivalence
//! relations on blocks are given by a pair of subtrees of `𝕋(n)` through five
//! projection forms; every other pair is rejected.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::canonize::project_i;
use crate::space::{SpaceBinding, SpaceError};
use crate::subsets::{is_subset_sorted, k_subsets, strictly_increasing};
use crate::trees::{enumerate_subtrees, ProjectedTree, StructureClause, StructureError, SubtreeMask, TreeNode};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct H2Block {
    pub index: usize,
    pub spine: u32,
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

impl H2Block {
    pub fn new(index: usize, spine: u32, rows: Vec<u32>, cols: Vec<u32>) -> Self {
        H2Block { index, spine, rows, cols }
    }

    pub fn is_subtree_of(&self, other: &H2Block) -> bool {
        self.spine == other.spine
            && is_subset_sorted(&self.rows, &other.rows)
            && is_subset_sorted(&self.cols, &other.cols)
    }

    /// Every valid block at position `index` with the given spine.
    pub fn all_at(index: usize, spine: u32) -> Vec<H2Block> {
        let ground: Vec<u32> = (0..=spine).collect();
        let sides = k_subsets(&ground, index + 1);
        let mut out = Vec::with_capacity(sides.len() * sides.len());
        for rows in &sides {
            for cols in &sides {
                out.push(H2Block { index, spine, rows: rows.clone(), cols: cols.clone() });
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct H2Member {
    pub blocks: Vec<H2Block>,
}

impl H2Member {
    pub fn from_parts(parts: Vec<(u32, Vec<u32>, Vec<u32>)>) -> Self {
        H2Member {
            blocks: parts
                .into_iter()
                .enumerate()
                .map(|(index, (spine, rows, cols))| H2Block { index, spine, rows, cols })
                .collect(),
        }
    }

    pub fn identity(depth: usize) -> Self {
        H2Member::from_parts(
            (0..depth as u32).map(|n| (n, (0..=n).collect(), (0..=n).collect())).collect(),
        )
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    pub fn last_spine(&self) -> Option<u32> {
        self.blocks.last().map(|b| b.spine)
    }

    pub fn prefix(&self, n: usize) -> H2Member {
        H2Member { blocks: self.blocks[..n.min(self.blocks.len())].to_vec() }
    }

    pub fn is_subtree_of(&self, other: &H2Member) -> bool {
        self.blocks.iter().all(|b| {
            other
                .blocks
                .binary_search_by(|o| o.spine.cmp(&b.spine))
                .is_ok_and(|i| b.is_subtree_of(&other.blocks[i]))
        })
    }
}

fn check_side(position: usize, spine: u32, side: &[u32]) -> Result<(), StructureError> {
    let fail = |clause| Err(StructureError { position, clause });
    if side.len() != position + 1 {
        return fail(StructureClause::LeafCount);
    }
    if !strictly_increasing(side) {
        return fail(StructureClause::LeavesNotIncreasing);
    }
    if side.last().is_some_and(|&i| i > spine) {
        return fail(StructureClause::LeafAboveSpine);
    }
    Ok(())
}

/// Square-block rules: `|I| = |J| = n + 1`, both below the spine, spines increasing.
pub fn validate_h2(m: &H2Member) -> Result<(), StructureError> {
    let mut prev: Option<u32> = None;
    for (position, b) in m.blocks.iter().enumerate() {
        let fail = |clause| Err(StructureError { position, clause });
        if b.index != position {
            return fail(StructureClause::IndexMismatch);
        }
        if b.rows.len() != b.cols.len() {
            return fail(StructureClause::SideMismatch);
        }
        check_side(position, b.spine, &b.rows)?;
        check_side(position, b.spine, &b.cols)?;
        if prev.is_some_and(|p| p >= b.spine) {
            return fail(StructureClause::SpinesNotIncreasing);
        }
        prev = Some(b.spine);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MaskPair {
    pub t0: SubtreeMask,
    pub t1: SubtreeMask,
}

impl MaskPair {
    pub fn new(t0: SubtreeMask, t1: SubtreeMask) -> Self {
        MaskPair { t0, t1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HyperError {
    Structure(StructureError),
    /// The pair is not one of the five projection forms.
    UnlistedMaskPair(MaskPair),
    MaskArityMismatch { index: usize, leaf_slots: usize },
    /// An `H^k` projection needs one index set per side.
    SideCount { expected: usize, got: usize },
}

impl fmt::Display for HyperError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperError::Structure(e) => write!(f, "structure error at {e}"),
            HyperError::UnlistedMaskPair(p) => write!(f, "unlisted mask pair {:?}/{:?}", p.t0, p.t1),
            HyperError::MaskArityMismatch { index, leaf_slots } => {
                write!(f, "mask index {index} but side has {leaf_slots} entries")
            }
            HyperError::SideCount { expected, got } => {
                write!(f, "{got} index sets for a block with {expected} sides")
            }
        }
    }
}

impl core::error::Error for HyperError {}

impl From<StructureError> for HyperError {
    fn from(e: StructureError) -> Self {
        HyperError::Structure(e)
    }
}

fn project(side: &[u32], idx: &[usize]) -> Result<Vec<u32>, HyperError> {
    project_i(side, idx).map_err(|_| HyperError::MaskArityMismatch {
        index: idx.iter().copied().max().unwrap_or(0),
        leaf_slots: side.len(),
    })
}

/// `π_{T0,T1}` for the five listed forms.
pub fn pi_pair(b: &H2Block, p: &MaskPair) -> Result<ProjectedTree, HyperError> {
    use SubtreeMask::*;
    let k = b.spine;
    let mut out: ProjectedTree = [TreeNode::Root].into_iter().collect();
    match (&p.t0, &p.t1) {
        (Root, Root) => {}
        (RootSpine, RootSpine) => {
            out.insert(TreeNode::Spine(k));
        }
        (RootSpineLeaves(i0), RootSpine) if !i0.is_empty() => {
            out.insert(TreeNode::Spine(k));
            out.extend(project(&b.rows, i0)?.into_iter().map(|i| TreeNode::Leaf(k, i)));
        }
        (RootSpine, RootSpineLeaves(i1)) if !i1.is_empty() => {
            out.insert(TreeNode::Spine(k));
            out.extend(project(&b.cols, i1)?.into_iter().map(|j| TreeNode::Leaf(k, j)));
        }
        (RootSpineLeaves(i0), RootSpineLeaves(i1)) if !i0.is_empty() && !i1.is_empty() => {
            out.insert(TreeNode::Spine(k));
            let rows = project(&b.rows, i0)?;
            let cols = project(&b.cols, i1)?;
            for &i in &rows {
                out.extend(cols.iter().map(|&j| TreeNode::Cell(k, i, j)));
            }
        }
        _ => return Err(HyperError::UnlistedMaskPair(p.clone())),
    }
    Ok(out)
}

pub fn eq_canonical_h2(a: &H2Block, b: &H2Block, p: &MaskPair) -> Result<bool, HyperError> {
    Ok(pi_pair(a, p)? == pi_pair(b, p)?)
}

/// Every listed pair for position `n`: both roots, both spines, rows only,
/// cols only, then rows and cols; leaf masks in the order of
/// [`enumerate_subtrees`].
pub fn enumerate_mask_pairs(n: usize) -> Vec<MaskPair> {
    use SubtreeMask::*;
    let leafy: Vec<SubtreeMask> =
        enumerate_subtrees(n).into_iter().filter(|t| matches!(t, RootSpineLeaves(_))).collect();
    let mut out = alloc::vec![MaskPair::new(Root, Root), MaskPair::new(RootSpine, RootSpine)];
    out.extend(leafy.iter().map(|t| MaskPair::new(t.clone(), RootSpine)));
    out.extend(leafy.iter().map(|t| MaskPair::new(RootSpine, t.clone())));
    for t0 in &leafy {
        out.extend(leafy.iter().map(|t1| MaskPair::new(t0.clone(), t1.clone())));
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct H2;

impl SpaceBinding for H2 {
    type Approx = H2Member;

    fn tag(&self) -> &'static str {
        "h2"
    }

    fn validate(&self, a: &H2Member) -> Result<(), SpaceError> {
        validate_h2(a).map_err(|e| SpaceError::ApproximationFromWrongSpace(format!("{e}")))
    }

    fn length(&self, a: &H2Member) -> usize {
        a.depth()
    }

    fn restrict(&self, a: &H2Member, n: usize) -> H2Member {
        a.prefix(n)
    }

    fn le_fin(&self, a: &H2Member, b: &H2Member) -> bool {
        a.is_subtree_of(b)
    }

    fn one_step(&self, a: &H2Member, within: &H2Member) -> Vec<H2Member> {
        let n = a.depth();
        let floor = a.last_spine();
        let mut out = Vec::new();
        for w in within.blocks.iter().filter(|w| floor.is_none_or(|s| w.spine > s)) {
            let cols = k_subsets(&w.cols, n + 1);
            for rows in k_subsets(&w.rows, n + 1) {
                for c in &cols {
                    let mut next = a.clone();
                    next.blocks.push(H2Block { index: n, spine: w.spine, rows: rows.clone(), cols: c.clone() });
                    out.push(next);
                }
            }
        }
        out
    }

    fn below(&self, b: &H2Member) -> Vec<H2Member> {
        fn go(b: &H2Member, from: usize, cur: &mut H2Member, out: &mut Vec<H2Member>) {
            out.push(cur.clone());
            let n = cur.depth();
            for p in from..b.depth() {
                let src = &b.blocks[p];
                let cols = k_subsets(&src.cols, n + 1);
                for rows in k_subsets(&src.rows, n + 1) {
                    for c in &cols {
                        cur.blocks.push(H2Block { index: n, spine: src.spine, rows: rows.clone(), cols: c.clone() });
                        go(b, p + 1, cur, out);
                        cur.blocks.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(b, 0, &mut H2Member::default(), &mut out);
        out
    }

    fn within_horizon(&self, c: &H2Member, x: &H2Member) -> bool {
        match (c.last_spine(), x.last_spine()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(sc), Some(sx)) => sc <= sx,
        }
    }
}

/// A block of `H^k`: one spine and `k` index sets of size `n + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HkBlock {
    pub index: usize,
    pub spine: u32,
    pub sides: Vec<Vec<u32>>,
}

pub fn validate_hk_block(b: &HkBlock) -> Result<(), StructureError> {
    for side in &b.sides {
        check_side(b.index, b.spine, side)?;
    }
    Ok(())
}

/// Spine and the projected grid `∏_t π_{I_t}(side_t)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridProjection {
    pub spine: u32,
    pub cells: BTreeSet<Vec<u32>>,
}

/// The componentwise grid projection for nonempty index sets on every side.
pub fn pi_grid(b: &HkBlock, masks: &[Vec<usize>]) -> Result<GridProjection, HyperError> {
    if masks.len() != b.sides.len() {
        return Err(HyperError::SideCount { expected: b.sides.len(), got: masks.len() });
    }
    let mut cells: BTreeSet<Vec<u32>> = [Vec::new()].into_iter().collect();
    for (side, idx) in b.sides.iter().zip(masks) {
        let coords = project(side, idx)?;
        cells = cells
            .into_iter()
            .flat_map(|prefix| {
                coords.iter().map(move |&c| {
                    let mut cell = prefix.clone();
                    cell.push(c);
                    cell
                })
            })
            .collect();
    }
    Ok(GridProjection { spine: b.spine, cells })
}
