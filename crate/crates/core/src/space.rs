//! Topological Ramsey spaces at finite truncation.
//!
//! A [`SpaceBinding`] supplies the approximation maps `r_n`, the quasi-order
//! `≤_fin` and an end-extension enumerator. Everything else in this module is
//! written once against that trait: depth, the finite levels `r_n[a, B]` of a
//! basic open set, the axiom checker for A.1–A.3, the pigeonhole search for A.4
//! and a truncated almost-reduction verdict.
//!
//! A member of the space is represented by its top approximation `r_N(B)`; the
//! lower approximations are recovered with [`SpaceBinding::restrict`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Default node cap for the exhaustive searches in this crate.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    /// The value is not a valid approximation for the bound space.
    ApproximationFromWrongSpace(String),
    /// A level beyond the truncation depth was requested.
    DepthExceeded { requested: usize, depth: usize },
    /// A level below the length of the approximation was requested.
    LengthBelowApproximation { requested: usize, length: usize },
    /// Truncated members need depth at least one.
    EmptyMember,
    PreconditionViolated(&'static str),
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::ApproximationFromWrongSpace(why) => {
                write!(f, "approximation not interpretable by this space: {why}")
            }
            SpaceError::DepthExceeded { requested, depth } => {
                write!(f, "level {requested} exceeds truncation depth {depth}")
            }
            SpaceError::LengthBelowApproximation { requested, length } => {
                write!(f, "level {requested} is below approximation length {length}")
            }
            SpaceError::EmptyMember => f.write_str("truncated member must have depth >= 1"),
            SpaceError::PreconditionViolated(why) => write!(f, "precondition violated: {why}"),
        }
    }
}

impl core::error::Error for SpaceError {}

/// The data a concrete space must provide.
///
/// Approximations are ordered by their derived `Ord`, which is the
/// lexicographic order of their payload; every enumeration in this module is
/// sorted by it so searches and reports are reproducible.
pub trait SpaceBinding {
    type Approx: Clone + Ord + fmt::Debug;

    fn tag(&self) -> &'static str;

    /// Structural validity of an approximation for this space.
    fn validate(&self, a: &Self::Approx) -> Result<(), SpaceError>;

    /// `|a|`, the `n` with `a = r_n(a)`.
    fn length(&self, a: &Self::Approx) -> usize;

    /// `r_n(a)` for `n <= |a|`.
    fn restrict(&self, a: &Self::Approx, n: usize) -> Self::Approx;

    fn le_fin(&self, a: &Self::Approx, b: &Self::Approx) -> bool;

    /// All `c` with `|c| = |a| + 1`, `a ⊏ c`, whose new part lies inside `within`.
    fn one_step(&self, a: &Self::Approx, within: &Self::Approx) -> Vec<Self::Approx>;

    /// All approximations `d` with `d ≤_fin b`. Must be finite (A.2(a)).
    fn below(&self, b: &Self::Approx) -> Vec<Self::Approx>;

    /// Whether `b ≤_fin X` can be decided from the truncation `x = r_N(X)`,
    /// i.e. whether `b` stays below the horizon of `x`.
    fn within_horizon(&self, b: &Self::Approx, x: &Self::Approx) -> bool;

    /// The order `A ≤ B` on truncated members.
    fn member_le(
        &self,
        a: &TruncatedMember<Self::Approx>,
        b: &TruncatedMember<Self::Approx>,
    ) -> bool {
        self.le_fin(a.top(), b.top())
    }
}

/// A depth-`N` prefix `r_N(X)` standing in for an infinite member `X`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncatedMember<A> {
    top: A,
    depth: usize,
}

impl<A: Clone + Ord + fmt::Debug> TruncatedMember<A> {
    pub fn new<S: SpaceBinding<Approx = A> + ?Sized>(space: &S, top: A) -> Result<Self, SpaceError> {
        space.validate(&top)?;
        let depth = space.length(&top);
        if depth == 0 {
            return Err(SpaceError::EmptyMember);
        }
        Ok(TruncatedMember { top, depth })
    }

    pub(crate) fn unchecked<S: SpaceBinding<Approx = A> + ?Sized>(space: &S, top: A) -> Self {
        let depth = space.length(&top);
        TruncatedMember { top, depth }
    }

    pub fn top(&self) -> &A {
        &self.top
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn into_top(self) -> A {
        self.top
    }

    /// `r_n` of the member; `n` is clamped to the depth.
    pub fn approx<S: SpaceBinding<Approx = A> + ?Sized>(&self, space: &S, n: usize) -> A {
        space.restrict(&self.top, n.min(self.depth))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    Finite(usize),
    /// Not attained within the truncation.
    Unbounded,
}

/// `depth_B(a)`: the least `n <= depth(B)` with `a ≤_fin r_n(B)`.
pub fn depth_of<S: SpaceBinding + ?Sized>(
    space: &S,
    a: &S::Approx,
    b: &TruncatedMember<S::Approx>,
) -> Result<Depth, SpaceError> {
    space.validate(a)?;
    Ok(depth_unchecked(space, a, b.top()))
}

fn depth_unchecked<S: SpaceBinding + ?Sized>(space: &S, a: &S::Approx, top: &S::Approx) -> Depth {
    (0..=space.length(top))
        .find(|&n| space.le_fin(a, &space.restrict(top, n)))
        .map_or(Depth::Unbounded, Depth::Finite)
}

/// `r_n[a, B]`: every `b` of length `n` with `a ⊑ b` and `b ≤_fin B`, sorted.
pub fn basic_open<S: SpaceBinding + ?Sized>(
    space: &S,
    a: &S::Approx,
    b: &TruncatedMember<S::Approx>,
    n: usize,
) -> Result<Vec<S::Approx>, SpaceError> {
    space.validate(a)?;
    if n > b.depth() {
        return Err(SpaceError::DepthExceeded { requested: n, depth: b.depth() });
    }
    let length = space.length(a);
    if n < length {
        return Err(SpaceError::LengthBelowApproximation { requested: n, length });
    }
    Ok(cone_level(space, a, b.top(), n))
}

/// Unchecked `r_n[a, within]`; empty when nothing of length `n` fits.
pub(crate) fn cone_level<S: SpaceBinding + ?Sized>(
    space: &S,
    a: &S::Approx,
    within: &S::Approx,
    n: usize,
) -> Vec<S::Approx> {
    let length = space.length(a);
    if n < length || n > length + space.length(within) {
        return Vec::new();
    }
    let mut frontier = alloc::vec![a.clone()];
    for _ in length..n {
        let next: BTreeSet<S::Approx> =
            frontier.iter().flat_map(|c| space.one_step(c, within)).collect();
        frontier = next.into_iter().collect();
        if frontier.is_empty() {
            break;
        }
    }
    frontier.retain(|c| space.length(c) == n && space.le_fin(c, within));
    frontier
}

/// Every level of the cone `[a, within]` available in the truncation.
fn cone_all<S: SpaceBinding + ?Sized>(
    space: &S,
    a: &S::Approx,
    within: &S::Approx,
) -> Vec<Vec<S::Approx>> {
    let length = space.length(a);
    let mut levels = Vec::new();
    for n in length..=length + space.length(within) {
        let level = cone_level(space, a, within, n);
        if level.is_empty() {
            break;
        }
        levels.push(level);
    }
    levels
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Counterexample(String),
    /// Depth-limited: the truncation cannot decide the clause.
    Indeterminate(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseReport {
    pub clause: &'static str,
    pub verdict: Verdict,
    /// Number of instances examined.
    pub checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub space: &'static str,
    pub clauses: Vec<ClauseReport>,
}

impl AxiomReport {
    pub fn clause(&self, name: &str) -> Option<&ClauseReport> {
        self.clauses.iter().find(|c| c.clause == name)
    }

    pub fn any_counterexample(&self) -> bool {
        self.clauses.iter().any(|c| c.verdict.is_counterexample())
    }

    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.verdict.is_pass())
    }
}

/// Collects instance outcomes; the first counterexample wins, then the first
/// indeterminate instance.
struct Tally {
    clause: &'static str,
    checked: usize,
    counterexample: Option<String>,
    indeterminate: Option<String>,
}

impl Tally {
    fn new(clause: &'static str) -> Self {
        Tally { clause, checked: 0, counterexample: None, indeterminate: None }
    }

    fn ok(&mut self) {
        self.checked += 1;
    }

    fn fail(&mut self, witness: String) {
        self.checked += 1;
        self.counterexample.get_or_insert(witness);
    }

    fn unknown(&mut self, why: String) {
        self.checked += 1;
        self.indeterminate.get_or_insert(why);
    }

    fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    fn finish(self) -> ClauseReport {
        let verdict = match (self.counterexample, self.indeterminate) {
            (Some(w), _) => Verdict::Counterexample(w),
            (None, Some(w)) => Verdict::Indeterminate(w),
            (None, None) => Verdict::Pass,
        };
        ClauseReport { clause: self.clause, verdict, checked: self.checked }
    }
}

/// Checks A.1(a)–(c), the quasi-order and A.2(a)–(c), and A.3(a)–(b) on every
/// instance derivable from `sample` within truncation.
///
/// The approximation universe is every `r_n(A)` for `A` in the sample. A.3(b)
/// searches sub-members of `B`; when none is found inside the truncation the
/// clause is indeterminate rather than failed.
pub fn check_axioms_a123<S: SpaceBinding + ?Sized>(
    space: &S,
    sample: &[TruncatedMember<S::Approx>],
    budget: usize,
) -> AxiomReport {
    let universe: Vec<S::Approx> = sample
        .iter()
        .flat_map(|m| (0..=m.depth()).map(move |n| space.restrict(m.top(), n)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut clauses = Vec::new();

    // A.1(a): r_0(A) is the unique empty approximation.
    let mut t = Tally::new("A.1(a)");
    let empty = sample.first().map(|m| space.restrict(m.top(), 0));
    for m in sample {
        let r0 = space.restrict(m.top(), 0);
        if space.length(&r0) != 0 || Some(&r0) != empty.as_ref() {
            t.fail(format!("r_0({:?}) = {:?}", m.top(), r0));
        } else {
            t.ok();
        }
    }
    clauses.push(t.finish());

    // A.1(b): distinct members of equal depth differ at some level.
    let mut t = Tally::new("A.1(b)");
    for (i, a) in sample.iter().enumerate() {
        for b in &sample[i + 1..] {
            if a.top() == b.top() || a.depth() != b.depth() {
                continue;
            }
            let differs = (0..=a.depth()).any(|n| a.approx(space, n) != b.approx(space, n));
            if differs {
                t.ok();
            } else {
                t.fail(format!("{:?} and {:?} agree at every level", a.top(), b.top()));
            }
        }
    }
    clauses.push(t.finish());

    // A.1(c): r_n(A) = r_m(B) forces n = m and agreement below.
    let mut t = Tally::new("A.1(c)");
    'c: for a in sample {
        for b in sample {
            for n in 0..=a.depth() {
                let ra = a.approx(space, n);
                for m in 0..=b.depth() {
                    if ra != b.approx(space, m) {
                        continue;
                    }
                    let below_agree = (0..n).all(|k| a.approx(space, k) == b.approx(space, k));
                    if n != m || !below_agree {
                        t.fail(format!(
                            "r_{n}({:?}) = r_{m}({:?}) but the levels do not cohere",
                            a.top(),
                            b.top()
                        ));
                        break 'c;
                    }
                    t.ok();
                }
            }
        }
    }
    clauses.push(t.finish());

    // ≤_fin is a quasi-order on the universe.
    let mut t = Tally::new("A.2(quasi-order)");
    'q: for x in &universe {
        if !space.le_fin(x, x) {
            t.fail(format!("not reflexive at {x:?}"));
            break;
        }
        t.ok();
        for y in universe.iter().filter(|y| space.le_fin(x, y)) {
            for z in universe.iter().filter(|z| space.le_fin(y, z)) {
                if !space.le_fin(x, z) {
                    t.fail(format!("{x:?} ≤ {y:?} ≤ {z:?} but not {x:?} ≤ {z:?}"));
                    break 'q;
                }
                t.ok();
            }
        }
    }
    clauses.push(t.finish());

    // A.2(a): the ≤_fin-predecessors of b are the finite list `below(b)`.
    let mut t = Tally::new("A.2(a)");
    'a: for b in &universe {
        let below: BTreeSet<S::Approx> = space.below(b).into_iter().collect();
        if let Some(bad) = below.iter().find(|d| !space.le_fin(d, b)) {
            t.fail(format!("below({b:?}) lists {bad:?} which is not ≤_fin"));
            break;
        }
        for u in universe.iter().filter(|u| space.le_fin(u, b)) {
            if !below.contains(u) {
                t.fail(format!("{u:?} ≤_fin {b:?} but is missing from below({b:?})"));
                break 'a;
            }
        }
        t.ok();
    }
    clauses.push(t.finish());

    // A.2(b): A ≤ B iff every r_n(A) sits ≤_fin some r_m(B).
    let mut t = Tally::new("A.2(b)");
    for a in sample {
        for b in sample {
            let claimed = space.member_le(a, b);
            let failing = (0..=a.depth()).find(|&n| {
                let ra = a.approx(space, n);
                !(0..=b.depth()).any(|m| space.le_fin(&ra, &b.approx(space, m)))
            });
            match (claimed, failing) {
                (true, Some(n)) => t.fail(format!(
                    "{:?} ≤ {:?} claimed but r_{n} has no ≤_fin bound",
                    a.top(),
                    b.top()
                )),
                (false, None) => t.fail(format!(
                    "{:?} ≤ {:?} rejected though every level embeds",
                    a.top(),
                    b.top()
                )),
                _ => t.ok(),
            }
        }
    }
    clauses.push(t.finish());

    // A.2(c): a ⊏ b ≤_fin c implies a ≤_fin d for some d ⊏ c.
    let mut t = Tally::new("A.2(c)");
    'c2: for c in &universe {
        let c_len = space.length(c);
        for b in space.below(c) {
            for j in 0..space.length(&b) {
                let a = space.restrict(&b, j);
                if (0..c_len).any(|i| space.le_fin(&a, &space.restrict(c, i))) {
                    t.ok();
                } else {
                    t.fail(format!("{a:?} ⊏ {b:?} ≤_fin {c:?} with no bound below {c:?}"));
                    break 'c2;
                }
            }
        }
    }
    clauses.push(t.finish());

    // A.3(a): depth_B(a) = n finite gives [a, A] ≠ ∅ for A ∈ [r_n(B), B].
    // Within truncation the cone of a inside A must reach every length up to
    // |a| + (depth(A) - n).
    let mut t = Tally::new("A.3(a)");
    'a3: for b in sample {
        for a in &universe {
            let Depth::Finite(n) = depth_unchecked(space, a, b.top()) else { continue };
            let rb = b.approx(space, n);
            for am in sample {
                if am.depth() < n || am.approx(space, n) != rb || !space.member_le(am, b) {
                    continue;
                }
                let la = space.length(a);
                let reach = la + (am.depth() - n);
                match (la..=reach).find(|&m| cone_level(space, a, am.top(), m).is_empty()) {
                    None => t.ok(),
                    Some(m) => {
                        t.fail(format!(
                            "depth_{:?}({a:?}) = {n} but r_{m}[{a:?}, {:?}] is empty",
                            b.top(),
                            am.top()
                        ));
                        break 'a3;
                    }
                }
            }
        }
    }
    clauses.push(t.finish());

    // A.3(b): A ≤ B and [a, A] ≠ ∅ give A' ∈ [depth_B(a), B] with
    // ∅ ≠ [a, A'] ⊆ [a, A].
    let mut t = Tally::new("A.3(b)");
    for b in sample {
        for am in sample {
            if !space.member_le(am, b) {
                continue;
            }
            for a in &universe {
                if !space.le_fin(a, am.top()) {
                    continue;
                }
                let Depth::Finite(n) = depth_unchecked(space, a, b.top()) else {
                    t.fail(format!("{a:?} ≤_fin {:?} ≤ {:?} but has no depth", am.top(), b.top()));
                    continue;
                };
                match refine_a3b(space, a, am.top(), b.top(), n, budget) {
                    Some(_) => t.ok(),
                    None => t.unknown(format!(
                        "no A' found for a={a:?}, A={:?}, B={:?} within truncation",
                        am.top(),
                        b.top()
                    )),
                }
                if t.failed() {
                    break;
                }
            }
        }
    }
    clauses.push(t.finish());

    AxiomReport { space: space.tag(), clauses }
}

/// Search for `A' ∈ [r_n(B), B]` whose cone over `a` is nonempty, contained
/// in the cone of `a` inside `A` (below `A`'s horizon), and as long as it.
fn refine_a3b<S: SpaceBinding + ?Sized>(
    space: &S,
    a: &S::Approx,
    am: &S::Approx,
    b: &S::Approx,
    n: usize,
    budget: usize,
) -> Option<S::Approx> {
    let target: Vec<BTreeSet<S::Approx>> =
        cone_all(space, a, am).into_iter().map(|l| l.into_iter().collect()).collect();
    let la = space.length(a);
    let fits = |p: &S::Approx| -> bool {
        cone_all(space, a, p).iter().enumerate().all(|(i, level)| {
            level
                .iter()
                .filter(|c| space.within_horizon(c, am))
                .all(|c| target.get(i).is_some_and(|t| t.contains(c)))
        })
    };
    let long_enough = |p: &S::Approx| cone_all(space, a, p).len() >= target.len();

    let mut nodes = 0usize;
    let mut stack = alloc::vec![space.restrict(b, n)];
    while let Some(p) = stack.pop() {
        nodes += 1;
        if nodes > budget {
            return None;
        }
        if !fits(&p) {
            continue;
        }
        if long_enough(&p) && space.length(&p) >= la.min(n) {
            return Some(p);
        }
        let mut children = space.one_step(&p, b);
        children.sort();
        children.reverse();
        stack.extend(children);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// `r_{|a|+1}[a, A] ⊆ O`.
    Inside,
    /// `r_{|a|+1}[a, A] ⊆ O^c`.
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A4Witness<A> {
    pub member: TruncatedMember<A>,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum A4Outcome<A> {
    Witness(A4Witness<A>),
    NotFoundWithinTruncation { budget_exhausted: bool, nodes: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Cap on visited candidate sub-members.
    pub budget: usize,
    /// Least depth a witness must reach; defaults to `depth_B(a) + 1`.
    pub min_depth: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, min_depth: None }
    }
}

fn side_of<A>(level: &[A], inside: &impl Fn(&A) -> bool) -> Result<Option<Side>, ()> {
    let mut side = None;
    for c in level {
        let s = if inside(c) { Side::Inside } else { Side::Outside };
        match side {
            None => side = Some(s),
            Some(prev) if prev != s => return Err(()),
            _ => {}
        }
    }
    Ok(side)
}

/// Pigeonhole search: find `A ∈ [depth_B(a), B]` of depth at least
/// `min_depth` such that `r_{|a|+1}[a, A]` is nonempty and lies entirely
/// inside or entirely outside `inside`.
///
/// The search is a depth-first walk over end-extensions of `r_n(B)` inside `B`
/// in lexicographic order, pruned as soon as the level becomes mixed. Above
/// `min_depth` it extends greedily and returns the first member that cannot be
/// extended further, so `B` itself is returned whenever it qualifies.
pub fn check_a4<S: SpaceBinding + ?Sized>(
    space: &S,
    a: &S::Approx,
    b: &TruncatedMember<S::Approx>,
    inside: impl Fn(&S::Approx) -> bool,
    opts: SearchOptions,
) -> Result<A4Outcome<S::Approx>, SpaceError> {
    let Depth::Finite(n) = depth_of(space, a, b)? else {
        return Err(SpaceError::PreconditionViolated("depth_B(a) is unbounded"));
    };
    let min_depth = opts.min_depth.unwrap_or(n + 1).max(n + 1);
    let next_len = space.length(a) + 1;

    struct Walk<'s, S: SpaceBinding + ?Sized, F> {
        space: &'s S,
        a: &'s S::Approx,
        top: &'s S::Approx,
        inside: F,
        next_len: usize,
        min_depth: usize,
        budget: usize,
        nodes: usize,
    }

    impl<S: SpaceBinding + ?Sized, F: Fn(&S::Approx) -> bool> Walk<'_, S, F> {
        fn go(&mut self, p: S::Approx, side: Option<Side>) -> Result<Option<(S::Approx, Side)>, ()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            let mut children = self.space.one_step(&p, self.top);
            children.sort();
            children.dedup();
            for child in children {
                let level = cone_level(self.space, self.a, &child, self.next_len);
                let Ok(s) = side_of(&level, &self.inside) else { continue };
                if let Some(found) = self.go(child, s.or(side))? {
                    return Ok(Some(found));
                }
            }
            match side {
                Some(s) if self.space.length(&p) >= self.min_depth => Ok(Some((p, s))),
                _ => Ok(None),
            }
        }
    }

    let start = b.approx(space, n);
    let start_level = cone_level(space, a, &start, next_len);
    let Ok(start_side) = side_of(&start_level, &inside) else {
        return Ok(A4Outcome::NotFoundWithinTruncation { budget_exhausted: false, nodes: 0 });
    };
    let mut walk = Walk {
        space,
        a,
        top: b.top(),
        inside,
        next_len,
        min_depth,
        budget: opts.budget,
        nodes: 0,
    };
    Ok(match walk.go(start, start_side) {
        Ok(Some((top, side))) => A4Outcome::Witness(A4Witness {
            member: TruncatedMember::unchecked(space, top),
            side,
        }),
        Ok(None) => A4Outcome::NotFoundWithinTruncation { budget_exhausted: false, nodes: walk.nodes },
        Err(()) => A4Outcome::NotFoundWithinTruncation { budget_exhausted: true, nodes: walk.nodes },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlmostVerdict<A> {
    /// Some `a ∈ AR|Y` has `[a, Y] ⊆ [a, X]` at every checkable level.
    Holds(A),
    /// No such `a` up to this depth; says nothing about the infinite relation.
    FailsUpToDepth(usize),
}

/// Truncated almost reduction `Y ≤* X`.
///
/// Candidates `a` range over `below(r_N(Y))` by length, then lexicographically.
/// A candidate must satisfy `a ≤_fin X`, its cone in `Y` must contain at least
/// one checkable extension, and every extension of `Y`'s cone that stays below
/// `X`'s horizon must also lie in `X`'s cone.
pub fn almost_reduces<S: SpaceBinding + ?Sized>(
    space: &S,
    y: &TruncatedMember<S::Approx>,
    x: &TruncatedMember<S::Approx>,
) -> AlmostVerdict<S::Approx> {
    let depth = y.depth().min(x.depth());
    let mut candidates = space.below(y.top());
    candidates.sort_by(|p, q| space.length(p).cmp(&space.length(q)).then_with(|| p.cmp(q)));
    candidates.dedup();
    for a in candidates {
        if !space.le_fin(&a, x.top()) {
            continue;
        }
        let la = space.length(&a);
        let mut checkable = false;
        let mut contained = true;
        for n in la + 1..=la + depth {
            let in_x: BTreeSet<S::Approx> = cone_level(space, &a, x.top(), n).into_iter().collect();
            for c in cone_level(space, &a, y.top(), n) {
                if !space.within_horizon(&c, x.top()) {
                    continue;
                }
                checkable = true;
                if !in_x.contains(&c) {
                    contained = false;
                    break;
                }
            }
            if !contained {
                break;
            }
        }
        if checkable && contained {
            return AlmostVerdict::Holds(a);
        }
    }
    AlmostVerdict::FailsUpToDepth(depth)
}
