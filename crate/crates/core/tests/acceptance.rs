//! One line per acceptance criterion. A criterion that does not hold is
//! printed as FAIL with the offending graphs; the run only errors when an
//! outcome differs from the recorded one (see `EXPECTED_FAILS`).

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vtorb::families::{
    cubic_corpus, heawood_shift, named, pappus_shift, psi, psi_swap, quartic_corpus, spx,
    spx_swap, FamilySpec,
};
use vtorb::search::are_isomorphic;
use vtorb::verify::{scan, Claim, Report, Status};
use vtorb::{automorphism_group, brute_force_automorphisms, cyclic_data, min_gcd_identity_check, Graph, Perm};

const CAP: usize = 1 << 22;

/// Criteria known not to hold, and why.
///  4: SPX(r, r-1) has a trivial vertex stabiliser, so its exponent is 1.
///  6: an automorphism of K3,3 with orbits 1 + 2 + 3 has 6 mu o = 108 > 17n.
const EXPECTED_FAILS: [usize; 2] = [4, 6];

struct Outcome {
    pass: bool,
    detail: String,
    /// For an expected failure: fails exactly where recorded.
    as_recorded: bool,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), as_recorded: true }
}

fn corpus(specs: &[FamilySpec]) -> Vec<(String, Graph)> {
    specs.iter().map(|s| (s.to_string(), s.build().unwrap())).collect()
}

/// Ids whose verdict for `claim` has one of `statuses`.
fn with_status(r: &Report, claim: Claim, statuses: &[Status]) -> Vec<String> {
    r.verdicts_for(claim)
        .filter(|v| statuses.contains(&v.status))
        .map(|v| v.graph.clone())
        .collect()
}

fn all_exact(r: &Report, claim: Claim) -> bool {
    r.verdicts_for(claim).all(|v| v.status != Status::Inexact)
}

/// Holds on every applicable graph, all verdicts exact, and the skipped ones
/// are exactly `skipped`.
fn holds_except(r: &Report, claim: Claim, skipped: impl Fn(&str) -> bool, vt: &HashSet<String>) -> (bool, String) {
    let fails = with_status(r, claim, &[Status::Fails, Status::Inexact]);
    let holds = with_status(r, claim, &[Status::Holds]);
    let wrong_skip: Vec<String> = with_status(r, claim, &[Status::Skipped])
        .into_iter()
        .filter(|g| vt.contains(g) && !skipped(g))
        .collect();
    let pass = fails.is_empty() && wrong_skip.is_empty() && all_exact(r, claim);
    (
        pass,
        format!("{} hold, fails/inexact {:?}, unexpected skips {:?}", holds.len(), fails, wrong_skip),
    )
}

fn random_connected(rng: &mut StdRng) -> Graph {
    loop {
        let n = rng.gen_range(1..=8);
        let p = rng.gen_range(0.2..0.8);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        let g = Graph::from_edges(n, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

fn criterion1() -> Outcome {
    let mut graphs: Vec<Graph> = cubic_corpus(8)
        .iter()
        .chain(&quartic_corpus(4, 8))
        .map(|s| s.build().unwrap())
        .filter(|g| g.order() <= 8)
        .collect();
    let families = graphs.len();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    graphs.extend((0..500).map(|_| random_connected(&mut rng)));
    let mut mismatches = 0;
    for g in &graphs {
        let fast: HashSet<Perm> = automorphism_group(g).elements().collect();
        let slow: HashSet<Perm> = brute_force_automorphisms(g).unwrap().into_iter().collect();
        if fast != slow {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("{} graphs ({families} family members + 500 random), {mismatches} mismatches", graphs.len()),
    )
}

fn is_circulant_family(id: &str) -> bool {
    id.starts_with("circulant(") || id.starts_with("moebius(")
}

fn criterion2(r: &Report, vt: &HashSet<String>) -> Outcome {
    let (holds, detail) = holds_except(r, Claim::MeoBound, |_| false, vt);
    let not_tight: Vec<&str> = r
        .verdicts_for(Claim::MeoBound)
        .filter(|v| is_circulant_family(&v.graph))
        .filter(|v| v.measured.get("meo_equals_n") != Some(&serde_json::Value::Bool(true)))
        .map(|v| v.graph.as_str())
        .collect();
    let circulants = r.verdicts_for(Claim::MeoBound).filter(|v| is_circulant_family(&v.graph)).count();
    outcome(
        holds && not_tight.is_empty(),
        format!("{detail}; meo = n on {}/{circulants} circulants", circulants - not_tight.len()),
    )
}

fn criterion3() -> Outcome {
    let specs = quartic_corpus(16, 32);
    let r = scan("quartic", &corpus(&specs), &[Claim::MeoBound], CAP);
    let fails = with_status(&r, Claim::MeoBound, &[Status::Fails, Status::Inexact, Status::Skipped]);
    outcome(
        fails.is_empty(),
        format!("{} quartic graphs, meo <= 9n on all; not holding: {fails:?}", specs.len()),
    )
}

fn criterion4(r: &Report, vt: &HashSet<String>) -> Outcome {
    let (local_ok, detail) = holds_except(r, Claim::MeoLocal, |_| false, vt);
    let mut wrong = Vec::new();
    let mut checked = 0;
    let mut recorded = true;
    for rr in 3..=6 {
        for s in 1..rr {
            let aut = automorphism_group(&spx(rr, s).unwrap());
            let exp = aut.stabiliser(0).exponent(CAP);
            checked += 1;
            if !exp.exact || exp.value != BigUint::from(2u32) {
                wrong.push(format!("spx({rr},{s}): exponent {}", exp.value));
                recorded &= s == rr - 1 && exp.exact && exp.value == BigUint::from(1u32);
            } else {
                recorded &= s != rr - 1;
            }
        }
    }
    Outcome {
        as_recorded: local_ok && recorded,
        ..outcome(
            local_ok && wrong.is_empty(),
            format!("meo_local <= 6: {detail}; stabiliser exponent 2 on {}/{checked} SPX, not on {wrong:?}", checked - wrong.len()),
        )
    }
}

fn criterion5(r: &Report, vt: &HashSet<String>, k33: &HashSet<String>) -> Outcome {
    let (holds, detail) = holds_except(r, Claim::RegularOrbits, |g| k33.contains(g), vt);
    let g = named("k33").unwrap();
    let elements: Vec<Perm> = automorphism_group(&g).elements().collect();
    let without: Vec<&Perm> = elements.iter().filter(|p| !cyclic_data(p).has_regular_orbit()).collect();
    let witness = r
        .verdicts_for(Claim::RegularOrbits)
        .find(|v| v.graph == "k33")
        .and_then(|v| v.witness.as_ref())
        .and_then(|w| w.element.clone())
        .map(|e| Perm::from_images(e).unwrap());
    let witness_ok = witness.is_some_and(|p| p.is_automorphism(&g) && !cyclic_data(&p).has_regular_orbit());
    outcome(
        holds && elements.len() == 72 && !without.is_empty() && witness_ok,
        format!(
            "{detail}; K3,3: {} of {} automorphisms lack a regular orbit, witness re-checked: {witness_ok}",
            without.len(),
            elements.len()
        ),
    )
}

fn criterion6(r: &Report, k33: &HashSet<String>) -> Outcome {
    let fails = with_status(r, Claim::MuBound, &[Status::Fails, Status::Inexact]);
    let witnesses: Vec<String> = r
        .verdicts_for(Claim::MuBound)
        .filter(|v| v.status == Status::Fails)
        .filter_map(|v| v.witness.as_ref().map(|w| format!("{}: {}", v.graph, w.cycles.clone().unwrap_or_default())))
        .collect();
    let holds = with_status(r, Claim::MuBound, &[Status::Holds]).len();
    let failing: HashSet<String> = fails.iter().cloned().collect();
    Outcome {
        as_recorded: &failing == k33 && all_exact(r, Claim::MuBound),
        ..outcome(fails.is_empty(), format!("{holds} hold; violated on {witnesses:?}"))
    }
}

fn criterion7(r: &Report, vt: &HashSet<String>, k33: &HashSet<String>, spx_ids: &HashSet<String>) -> Outcome {
    let (holds, detail) = holds_except(r, Claim::RegularRatio, |g| k33.contains(g) || spx_ids.contains(g), vt);
    let mut psi_ok = true;
    for rr in [4, 6, 8] {
        let g = psi(rr).unwrap();
        let p = psi_swap(rr).unwrap();
        let d = cyclic_data(&p);
        let regular = d.regular_points();
        psi_ok &= p.is_automorphism(&g) && 3 * regular == 2 * g.order();
    }
    outcome(holds && psi_ok, format!("{detail}; psi swap ratio exactly 2/3 for r = 4, 6, 8: {psi_ok}"))
}

fn orbit_size_set(p: &Perm) -> BTreeSet<usize> {
    p.cycle_lengths().into_iter().collect()
}

fn criterion8() -> Outcome {
    let pappus = named("pappus").unwrap();
    let heawood = named("heawood").unwrap();
    let ps = pappus_shift();
    let hs = heawood_shift();
    let pappus_ok = ps.is_automorphism(&pappus) && orbit_size_set(&ps) == BTreeSet::from([6, 3, 2, 1]);
    let heawood_ok = hs.is_automorphism(&heawood) && orbit_size_set(&hs) == BTreeSet::from([4, 2, 1]);
    let mut spx_ok = true;
    for rr in 3..=6 {
        let g = spx(rr, 1).unwrap();
        let p = spx_swap(rr, 1).unwrap();
        let n = g.order();
        let mut lens = p.cycle_lengths();
        lens.sort_unstable();
        spx_ok &= p.is_automorphism(&g)
            && p.order() == BigUint::from(2u32)
            && lens.len() == n - 2
            && lens[lens.len() - 2..] == [2, 2];
    }
    outcome(
        pappus_ok && heawood_ok && spx_ok,
        format!("pappus {{6,3,2,1}}: {pappus_ok}, heawood {{4,2,1}}: {heawood_ok}, SPX(r,1) order-2 with n-2 orbits: {spx_ok}"),
    )
}

fn criterion9(r: &Report, vt: &HashSet<String>, at: &HashSet<String>) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0009);
    let mut mingcd_bad = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=30);
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            images.swap(i, rng.gen_range(0..=i));
        }
        if !min_gcd_identity_check(&Perm::from_images(images).unwrap()) {
            mingcd_bad += 1;
        }
    }
    let (basic1, d1) = holds_except(r, Claim::LemmaBasic1, |_| false, vt);
    let (lemma_mu, d2) = holds_except(r, Claim::LemmaMu, |_| false, vt);
    let (cor_tw, d3) = holds_except(r, Claim::CorTw, |_| false, vt);
    // VT but not AT: stabilisers are 2-groups and every element has a regular orbit
    let not_at: Vec<&String> = vt.iter().filter(|g| !at.contains(*g)).collect();
    let regular_ok = r
        .verdicts_for(Claim::RegularOrbits)
        .filter(|v| not_at.contains(&&v.graph))
        .all(|v| v.status == Status::Holds);
    let two_groups = r
        .verdicts_for(Claim::CorTw)
        .filter(|v| not_at.contains(&&v.graph))
        .all(|v| v.measured.get("stabiliser_p_group") == Some(&serde_json::Value::Bool(true)));
    outcome(
        mingcd_bad == 0 && basic1 && lemma_mu && cor_tw && regular_ok && two_groups,
        format!(
            "mingcd: {mingcd_bad}/10000 bad; basic1: {d1}; lemma mu: {d2}; cor tw: {d3}; {} VT-not-AT graphs with 2-group stabilisers: {two_groups}, regular orbits: {regular_ok}",
            not_at.len()
        ),
    )
}

fn criterion10(r: &Report, vt: &HashSet<String>, k33: &HashSet<String>) -> Outcome {
    let (ratio, d1) = holds_except(r, Claim::LemmaOrbitRatio, |g| k33.contains(g), vt);
    let (sizes, d2) = holds_except(r, Claim::OrbitSizeLaw, |g| k33.contains(g), vt);
    outcome(ratio && sizes, format!("orbit ratio: {d1}; size law: {d2}"))
}

fn main() -> ExitCode {
    let specs = cubic_corpus(64);
    let cubic = corpus(&specs);
    let start = Instant::now();
    let claims = [
        Claim::MeoBound,
        Claim::MeoLocal,
        Claim::RegularOrbits,
        Claim::MuBound,
        Claim::RegularRatio,
        Claim::OrbitSizeLaw,
        Claim::LemmaBasic1,
        Claim::LemmaMu,
        Claim::CorTw,
        Claim::LemmaOrbitRatio,
    ];
    let report = scan("cubic-small", &cubic, &claims, CAP);
    println!("cubic-small: {} graphs scanned in {:.1?}", cubic.len(), start.elapsed());

    let k33_graph = named("k33").unwrap();
    let mut vt = HashSet::new();
    let mut at = HashSet::new();
    let mut k33 = HashSet::new();
    let mut spx_ids = HashSet::new();
    for (spec, (id, g)) in specs.iter().zip(&cubic) {
        let aut = automorphism_group(g);
        if g.is_connected() && aut.is_transitive() {
            vt.insert(id.clone());
            if vtorb::search::is_arc_transitive(g) {
                at.insert(id.clone());
            }
        }
        if g.order() == 6 && are_isomorphic(g, &k33_graph) {
            k33.insert(id.clone());
        }
        if matches!(spec, FamilySpec::Spx { .. }) {
            spx_ids.insert(id.clone());
        }
    }

    let criteria: Vec<(usize, &str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "automorphism groups equal brute force on n <= 8", Box::new(criterion1)),
        (2, "meo <= n on cubic-small, equality on circulants", Box::new(|| criterion2(&report, &vt))),
        (3, "meo <= 9n on the quartic corpus", Box::new(criterion3)),
        (4, "meo_local <= 6; SPX stabiliser exponent 2", Box::new(|| criterion4(&report, &vt))),
        (5, "regular orbits; K3,3 witness", Box::new(|| criterion5(&report, &vt, &k33))),
        (6, "6 mu(g) o(g) <= 17n on cubic-small", Box::new(|| criterion6(&report, &k33))),
        (7, "regular points >= 5n/12; psi swap 2/3", Box::new(|| criterion7(&report, &vt, &k33, &spx_ids))),
        (8, "shift orbit sizes; SPX(r,1) involutions", Box::new(criterion8)),
        (9, "lemma suite", Box::new(|| criterion9(&report, &vt, &at))),
        (10, "orbit ratio and size laws", Box::new(|| criterion10(&report, &vt, &k33))),
    ];
    let mut unexpected = Vec::new();
    for (n, title, run) in &criteria {
        let t = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict}: {title} ({:.1?}): {}", t.elapsed(), o.detail);
        let expected_fail = EXPECTED_FAILS.contains(n);
        if o.pass == expected_fail || (expected_fail && !o.as_recorded) {
            unexpected.push(*n);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: outcomes as recorded (expected FAIL: {EXPECTED_FAILS:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
