use std::collections::BTreeMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsl_core::canonize::{er_canonize, is_irreducible, pr_canonize, EqRel};
use rsl_core::ellentuck::{
    flatten, front_coverage, homogenize, is_nash_williams, is_sperner, make_schreier, BarrierDescriptor, Coverage,
    Ellentuck, FlatFamily, Homogenized,
};
use rsl_core::graphs::{arrow_check, copies, enumerate_class, graph_canonize, Arrow};
use rsl_core::hypercube::{enumerate_mask_pairs, pi_pair, H2Member, H2};
use rsl_core::ideals::{fubini_inner, fubini_member, in_fin_tensor, positive_paper};
use rsl_core::trees::{enumerate_subtrees, pi_t, ProjectedTree, R1Member, TreeNode, R1};
use rsl_core::{
    basic_open, check_a4, check_axioms_a123, A4Outcome, SearchOptions, Side, SpaceBinding, TruncatedMember, Verdict,
};
use serde_json::{json, Value};

use crate::input::{
    self, err, format_key, load, parse_labels, parse_oracle, parse_sequence, total_labels, GraphJson,
    GraphRelationFile, H2BlockJson, InputError, MaskJson, MaskPairJson, R1BlockJson, RelationFile, SetJson,
};
use crate::report::{Check, Outcome, Status};
use crate::{BarrierCheck, Command, Settings, SpaceArg};

/// Largest position accepted by `subtrees`.
const SUBTREES_MAX_N: usize = 12;
/// Largest depth accepted by `axioms` per space; the campaign grows quickly with depth.
fn axioms_max_depth(space: SpaceArg) -> usize {
    match space {
        SpaceArg::Ellentuck => 6,
        SpaceArg::R1 => 4,
        SpaceArg::H2 => 3,
    }
}
/// Extra blocks on the identity member whose sub-members form the tree samples.
const HEADROOM: usize = 1;
/// Families longer than this are summarized by their size only.
const LIST_LIMIT: usize = 10_000;

pub fn dispatch(cmd: &Command, settings: Settings) -> Result<Outcome, InputError> {
    let mut out = Outcome::default();
    match cmd {
        Command::Axioms { space, depth, a4_samples, ground, seed } => {
            axioms(&mut out, *space, *depth, *a4_samples, *ground, *seed, settings)?
        }
        Command::Barrier { uniform, schreier: _, ground, check } => barrier(&mut out, *uniform, *ground, check)?,
        Command::Homogenize { ground, colors, target, coloring, uniform } => {
            out.param("ground", ground).param("colors", colors).param("target", target).param("uniform", uniform);
            out.param("budget", settings.budget);
            let f = flatten(&BarrierDescriptor::Uniform(*uniform), *ground).map_err(core_err)?;
            let raw: BTreeMap<String, u64> = load(coloring)?;
            let labels = total_labels(&parse_labels(&raw)?, f.members())?;
            if let Some(bad) = labels.iter().find(|&&c| c >= u64::from(*colors)) {
                return err(format!("color {bad} outside [0, {colors})"));
            }
            let labels: Vec<u32> = labels.into_iter().map(|c| c as u32).collect();
            match homogenize(&f, &labels, *target, settings.budget).map_err(core_err)? {
                Homogenized::Found { set, color } => {
                    out.verdict(Check::pass("homogeneous_set").with_witness(json!({"set": set, "color": color})));
                }
                Homogenized::NotFoundWithinGround { budget_exhausted } => {
                    out.verdict(
                        Check::new("homogeneous_set", Status::Indeterminate)
                            .with_witness(json!({"budget_exhausted": budget_exhausted})),
                    );
                }
            }
        }
        Command::Canonize { er, pr, graph: _, input, target } => canonize(&mut out, *er, *pr, input, *target, settings)?,
        Command::Subtrees { space, n } => subtrees(&mut out, *space, *n)?,
        Command::Project { space, block, mask } => project(&mut out, *space, block, mask)?,
        Command::Graphs { enumerate, copies, arrow } => graphs(&mut out, enumerate, copies, arrow)?,
        Command::Ideal { input, paper_positive } => {
            let set = load::<SetJson>(input)?.build()?;
            out.param("paper_positive", paper_positive);
            out.datum("rank", set.rank());
            out.datum("normalized", SetJson::from_set(&set.clone().normalized()));
            let in_ideal = in_fin_tensor(&set);
            out.datum("in_fin_tensor", in_ideal);
            out.verdict(Check::pass("well_formed"));
            if *paper_positive {
                let positive = positive_paper(&set).map_err(core_err)?;
                out.datum("paper_positive", positive);
                // Both notions are kept; a disagreement is reported, not resolved.
                let status = if positive == !in_ideal { Status::Pass } else { Status::Fail };
                out.verdict(Check::new("paper_positive_matches_outside_ideal", status));
            }
        }
        Command::Fubini { set, u, v } => {
            let a = load::<SetJson>(set)?.build()?;
            let uo = parse_oracle(u)?;
            let vs = parse_sequence(v)?;
            out.param("u", input::oracle_name(uo));
            out.param(
                "v",
                json!({
                    "default": input::oracle_name(vs.default),
                    "exceptions": vs.exceptions.iter().map(|(n, o)| (n.to_string(), input::oracle_name(*o))).collect::<BTreeMap<_, _>>(),
                }),
            );
            let inner = fubini_inner(&a, &vs).map_err(core_err)?;
            let member = fubini_member(&a, uo, &vs).map_err(core_err)?;
            let co_member = fubini_member(&a.complement(), uo, &vs).map_err(core_err)?;
            out.datum("member", member);
            out.datum("fibers_accepted", SetJson::from_set(&inner));
            let status = if member != co_member { Status::Pass } else { Status::Fail };
            out.verdict(Check::new("exactly_one_of_set_and_complement", status));
        }
    }
    Ok(out)
}

fn core_err(e: impl std::fmt::Display) -> InputError {
    InputError(e.to_string())
}

fn axioms(
    out: &mut Outcome,
    space: SpaceArg,
    depth: usize,
    samples: usize,
    ground: Option<u32>,
    seed: u64,
    settings: Settings,
) -> Result<(), InputError> {
    let max = axioms_max_depth(space);
    if depth == 0 || depth > max {
        return err(format!("depth must lie in 1..={max} for this space"));
    }
    out.param("depth", depth).param("a4_samples", samples).param("seed", seed).param("budget", settings.budget);
    match space {
        SpaceArg::Ellentuck => {
            let ground = ground.unwrap_or(depth as u32 + 2);
            if ground > 10 {
                return err("ground must be at most 10");
            }
            out.param("space", "ellentuck").param("ground", ground);
            let sample = Ellentuck.all_truncations(ground, depth);
            campaign(out, &Ellentuck, &sample, samples, seed, settings.budget);
        }
        SpaceArg::R1 => {
            if ground.is_some() {
                return err("--ground applies to the ellentuck space only");
            }
            out.param("space", "r1");
            let sample = members_below(&R1, R1Member::identity(depth + HEADROOM), depth);
            campaign(out, &R1, &sample, samples, seed, settings.budget);
        }
        SpaceArg::H2 => {
            if ground.is_some() {
                return err("--ground applies to the ellentuck space only");
            }
            out.param("space", "h2");
            let sample = members_below(&H2, H2Member::identity(depth + HEADROOM), depth);
            campaign(out, &H2, &sample, samples, seed, settings.budget);
        }
    }
    Ok(())
}

/// Every member `<= top` of depth `1..=depth`, in the order of `below`.
fn members_below<S: SpaceBinding>(space: &S, top: S::Approx, depth: usize) -> Vec<TruncatedMember<S::Approx>> {
    space
        .below(&top)
        .into_iter()
        .filter(|m| (1..=depth).contains(&space.length(m)))
        .map(|m| TruncatedMember::new(space, m).expect("sub-member of a valid member"))
        .collect()
}

fn hashed_color<A: Hash>(seed: u64, c: &A) -> bool {
    let mut h = DefaultHasher::new();
    seed.hash(&mut h);
    c.hash(&mut h);
    h.finish() & 1 == 1
}

fn campaign<S: SpaceBinding>(
    out: &mut Outcome,
    space: &S,
    sample: &[TruncatedMember<S::Approx>],
    samples: usize,
    seed: u64,
    budget: usize,
) where
    S::Approx: Hash,
{
    out.datum("sample_size", sample.len());
    let report = check_axioms_a123(space, sample, budget);
    for c in &report.clauses {
        let (status, witness) = match &c.verdict {
            Verdict::Pass => (Status::Pass, None),
            Verdict::Counterexample(w) => (Status::Fail, Some(w.clone())),
            Verdict::Indeterminate(w) => (Status::Indeterminate, Some(w.clone())),
        };
        let mut check = Check::new(c.clause, status).with_checked(c.checked);
        if let Some(w) = witness {
            check = check.with_witness(w);
        }
        out.verdict(check);
    }
    if samples == 0 {
        return;
    }
    // A.4 on random (a, B, coloring) triples with a = r_n(B), n < depth(B).
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut found, mut missing) = (0usize, 0usize);
    let mut failure: Option<String> = None;
    for _ in 0..samples {
        let b = &sample[rng.gen_range(0..sample.len())];
        let n = rng.gen_range(0..b.depth());
        let a = b.approx(space, n);
        let color_seed: u64 = rng.gen();
        let inside = |c: &S::Approx| hashed_color(color_seed, c);
        match check_a4(space, &a, b, inside, SearchOptions { budget, min_depth: None }) {
            Ok(A4Outcome::Witness(w)) => {
                let level = basic_open(space, &a, &w.member, space.length(&a) + 1).unwrap_or_default();
                let sided = level.iter().all(|c| inside(c) == (w.side == Side::Inside));
                if level.is_empty() || !sided || !space.member_le(&w.member, b) {
                    failure.get_or_insert_with(|| format!("witness {:?} for a = {a:?} does not validate", w.member.top()));
                } else {
                    found += 1;
                }
            }
            Ok(A4Outcome::NotFoundWithinTruncation { .. }) => missing += 1,
            Err(e) => {
                failure.get_or_insert_with(|| format!("check_a4 rejected a = {a:?}: {e}"));
            }
        }
    }
    let check = match failure {
        Some(w) => Check::new("A.4", Status::Fail).with_witness(w),
        None if missing == 0 => Check::pass("A.4"),
        None => Check::new("A.4", Status::Indeterminate).with_witness(json!({"witnessed": found, "not_found": missing})),
    };
    out.verdict(check.with_checked(samples));
}

fn barrier(out: &mut Outcome, uniform: Option<u32>, ground: u32, checks: &[BarrierCheck]) -> Result<(), InputError> {
    let d = match uniform {
        Some(k) => {
            out.param("barrier", format!("uniform:{k}"));
            BarrierDescriptor::Uniform(k)
        }
        None => {
            out.param("barrier", "schreier");
            make_schreier()
        }
    };
    out.param("ground", ground);
    let checks: Vec<BarrierCheck> =
        if checks.is_empty() { vec![BarrierCheck::Nw, BarrierCheck::Sperner, BarrierCheck::Coverage] } else { checks.to_vec() };
    out.param(
        "checks",
        checks
            .iter()
            .map(|c| match c {
                BarrierCheck::Nw => "nw",
                BarrierCheck::Sperner => "sperner",
                BarrierCheck::Coverage => "coverage",
            })
            .collect::<Vec<_>>(),
    );
    let rank = d.rank().map_err(core_err)?;
    let f = flatten(&d, ground).map_err(core_err)?;
    out.datum("rank", rank.to_string());
    out.datum("size", f.len());
    if f.len() <= LIST_LIMIT {
        out.datum("members", f.members());
    }
    for c in checks {
        out.verdict(match c {
            BarrierCheck::Nw => bool_check("nash_williams", is_nash_williams(&f)),
            BarrierCheck::Sperner => bool_check("sperner", is_sperner(&f)),
            BarrierCheck::Coverage => match front_coverage(&f, ground) {
                Coverage::Covered => Check::pass("coverage"),
                Coverage::Counterexample(path) => Check::new("coverage", Status::Fail).with_witness(path),
                Coverage::Indeterminate => Check::new("coverage", Status::Indeterminate),
            },
        });
    }
    Ok(())
}

fn bool_check(name: &str, ok: bool) -> Check {
    Check::new(name, if ok { Status::Pass } else { Status::Fail })
}

fn canonize(
    out: &mut Outcome,
    er: Option<usize>,
    pr: bool,
    path: &std::path::Path,
    target: Option<usize>,
    settings: Settings,
) -> Result<(), InputError> {
    if let Some(k) = er {
        let m = target.expect("clap requires --target");
        out.param("mode", "er").param("k", k).param("target", m);
        let file: RelationFile = load(path)?;
        out.param("ground", file.ground);
        let domain = flatten(&BarrierDescriptor::Uniform(k as u32), file.ground).map_err(core_err)?;
        let labels = total_labels(&parse_labels(&file.labels)?, domain.members())?;
        let rel = EqRel::new(domain, labels).map_err(core_err)?;
        match er_canonize(&rel, m).map_err(core_err)? {
            Some(w) => out.verdict(Check::pass("canonize").with_witness(json!({"m": w.m, "indices": w.indices}))),
            None => out.verdict(Check::new("canonize", Status::Indeterminate)),
        };
    } else if pr {
        let m = target.expect("clap requires --target");
        out.param("mode", "pr").param("target", m).param("budget", settings.budget);
        let file: RelationFile = load(path)?;
        out.param("ground", file.ground);
        let labels = parse_labels(&file.labels)?;
        let domain = FlatFamily::new(file.ground, labels.keys().cloned().collect()).map_err(core_err)?;
        let rel = EqRel::new(domain, labels.values().copied().collect()).map_err(core_err)?;
        match pr_canonize(&rel, m, settings.budget).map_err(core_err)? {
            Some(w) => {
                let phi: BTreeMap<String, &Vec<u32>> = w.phi.table.iter().map(|(a, x)| (format_key(a), x)).collect();
                out.verdict(Check::pass("canonize").with_witness(json!({"m": w.m, "phi": phi})));
                out.verdict(bool_check("irreducible", is_irreducible(&w.phi)));
            }
            None => {
                out.verdict(Check::new("canonize", Status::Indeterminate));
            }
        }
    } else {
        out.param("mode", "graph");
        let file: GraphRelationFile = load(path)?;
        let (a, b, c) = (file.a.build()?, file.b.build()?, file.c.build()?);
        out.param("a", &file.a).param("b", &file.b).param("c", &file.c).param("q", file.q);
        let domain_members = copies(&a, &c);
        let domain = FlatFamily::new(c.n(), domain_members).map_err(core_err)?;
        let labels = total_labels(&parse_labels(&file.labels)?, domain.members())?;
        let rel = EqRel::new(domain, labels).map_err(core_err)?;
        match graph_canonize(&rel, &a, &b, &c, file.q).map_err(core_err)? {
            Some(w) => out.verdict(
                Check::pass("canonize").with_witness(json!({"indices": w.indices, "b_copy": w.b_copy})),
            ),
            None => out.verdict(Check::new("canonize", Status::Indeterminate)),
        };
    }
    Ok(())
}

fn subtrees(out: &mut Outcome, space: SpaceArg, n: usize) -> Result<(), InputError> {
    if n > SUBTREES_MAX_N {
        return err(format!("n must be at most {SUBTREES_MAX_N}"));
    }
    out.param("n", n);
    let side = (1usize << (n + 1)) - 1;
    match space {
        SpaceArg::R1 => {
            out.param("space", "r1");
            let masks = enumerate_subtrees(n);
            out.datum("count", masks.len());
            out.datum("masks", masks.iter().map(MaskJson::from_mask).collect::<Vec<_>>());
            out.verdict(bool_check("count", masks.len() == side + 2).with_witness(side + 2));
        }
        SpaceArg::H2 => {
            out.param("space", "h2");
            let pairs = enumerate_mask_pairs(n);
            out.datum("count", pairs.len());
            out.datum("mask_pairs", pairs.iter().map(MaskPairJson::from_pair).collect::<Vec<_>>());
            let expected = 2 + 2 * side + side * side;
            out.verdict(bool_check("count", pairs.len() == expected).with_witness(expected));
        }
        SpaceArg::Ellentuck => return err("subtrees needs --space r1 or --space h2"),
    }
    Ok(())
}

fn node_json(n: &TreeNode) -> Value {
    match *n {
        TreeNode::Root => json!(["root"]),
        TreeNode::Spine(k) => json!(["spine", k]),
        TreeNode::Leaf(k, i) => json!(["leaf", k, i]),
        TreeNode::Cell(k, i, j) => json!(["cell", k, i, j]),
    }
}

fn tree_json(t: &ProjectedTree) -> Vec<Value> {
    t.iter().map(node_json).collect()
}

fn project(
    out: &mut Outcome,
    space: SpaceArg,
    block: &std::path::Path,
    mask: &std::path::Path,
) -> Result<(), InputError> {
    match space {
        SpaceArg::R1 => {
            out.param("space", "r1");
            let b = load::<R1BlockJson>(block)?.build()?;
            let t: MaskJson = load(mask)?;
            out.param("mask", &t);
            let projected = pi_t(&b, &t.build()?).map_err(core_err)?;
            out.datum("projection", tree_json(&projected));
        }
        SpaceArg::H2 => {
            out.param("space", "h2");
            let b = load::<H2BlockJson>(block)?.build()?;
            let p: MaskPairJson = load(mask)?;
            out.param("mask", &p);
            let projected = pi_pair(&b, &p.build()?).map_err(core_err)?;
            out.datum("projection", tree_json(&projected));
        }
        SpaceArg::Ellentuck => return err("project needs --space r1 or --space h2"),
    }
    out.verdict(Check::pass("projection"));
    Ok(())
}

fn graphs(
    out: &mut Outcome,
    enumerate: &Option<Vec<u32>>,
    copies_of: &Option<Vec<std::path::PathBuf>>,
    arrow: &Option<Vec<String>>,
) -> Result<(), InputError> {
    if let Some(v) = enumerate {
        let (n, q) = (v[0], v[1] as usize);
        out.param("op", "enumerate").param("n", n).param("q", q);
        let class = enumerate_class(n, q).map_err(core_err)?;
        out.datum("count", class.len());
        out.datum("graphs", class.iter().map(GraphJson::from_graph).collect::<Vec<_>>());
        out.verdict(Check::pass("enumerate"));
    } else if let Some(v) = copies_of {
        let a: GraphJson = load(&v[0])?;
        let c: GraphJson = load(&v[1])?;
        out.param("op", "copies").param("a", &a).param("c", &c);
        let found = copies(&a.build()?, &c.build()?);
        out.datum("count", found.len());
        out.datum("copies", &found);
        out.verdict(Check::pass("copies"));
    } else if let Some(v) = arrow {
        let f: GraphJson = load(std::path::Path::new(&v[0]))?;
        let s: usize = v[1].parse().map_err(|_| InputError(format!("bad S {:?}", v[1])))?;
        let n: usize = v[2].parse().map_err(|_| InputError(format!("bad N {:?}", v[2])))?;
        out.param("op", "arrow").param("coloring", &f).param("s", s).param("n", n);
        let check = match arrow_check(&f.build()?, s, n) {
            Arrow::ZeroHomog(x) => Check::pass("arrow").with_witness(json!({"zero_homogeneous": x})),
            Arrow::OneClique(y) => Check::pass("arrow").with_witness(json!({"one_clique": y})),
            Arrow::Neither => Check::new("arrow", Status::Fail),
        };
        out.verdict(check);
    }
    Ok(())
}
