//! Checks of the orbit bounds on concrete graphs, and a corpus scanner.
//!
//! Every check produces a [`Verdict`]. Per-element conditions are evaluated
//! in one pass over the automorphism group of each graph (exhaustive up to
//! the element cap, sampled above it), and a failing verdict carries the
//! first offending element in scan order. All comparisons are done on
//! integers; rational bounds are cleared of denominators first.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::constructions::{
    induced_group, invariant_matching_in, merge_cubic, merge_local_action, merge_quartic_in,
    DegreeFourAction,
};
use crate::families::{named, px_order, spx};
use crate::format::encode_graph6_string;
use crate::graph::Graph;
use crate::group::{Estimate, PermGroup};
use crate::perm::{min_gcd_identity_check, Perm};
use crate::search::{are_isomorphic, arc_orbits, automorphism_group};
use crate::serde_big::to_json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    MeoBound,
    MeoLocal,
    RegularOrbits,
    AdjacentRegularOrbits,
    MuBound,
    RegularRatio,
    OrbitSizeLaw,
    SemiprimitiveBound,
    SylowExponent6Valent,
    QuarticMerge,
    LemmaBasic1,
    LemmaMingcd,
    LemmaMu,
    CorTw,
    LemmaOrbitRatio,
    MergeLocal,
    ConjectureMu,
    ConjectureRatio,
    Fixicity,
}

/// How a failure is treated by callers deciding an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    Theorem,
    Lemma,
    Conjecture,
    Optional,
}

impl Claim {
    pub const ALL: [Claim; 19] = [
        Claim::MeoBound,
        Claim::MeoLocal,
        Claim::RegularOrbits,
        Claim::AdjacentRegularOrbits,
        Claim::MuBound,
        Claim::RegularRatio,
        Claim::OrbitSizeLaw,
        Claim::SemiprimitiveBound,
        Claim::SylowExponent6Valent,
        Claim::QuarticMerge,
        Claim::LemmaBasic1,
        Claim::LemmaMingcd,
        Claim::LemmaMu,
        Claim::CorTw,
        Claim::LemmaOrbitRatio,
        Claim::MergeLocal,
        Claim::ConjectureMu,
        Claim::ConjectureRatio,
        Claim::Fixicity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::MeoBound => "meo-bound",
            Claim::MeoLocal => "meo-local",
            Claim::RegularOrbits => "regular-orbits",
            Claim::AdjacentRegularOrbits => "adjacent-regular-orbits",
            Claim::MuBound => "mu-bound",
            Claim::RegularRatio => "regular-ratio",
            Claim::OrbitSizeLaw => "orbit-size-law",
            Claim::SemiprimitiveBound => "semiprimitive-bound",
            Claim::SylowExponent6Valent => "sylow-exponent-6valent",
            Claim::QuarticMerge => "quartic-merge",
            Claim::LemmaBasic1 => "lemma-basic1",
            Claim::LemmaMingcd => "lemma-mingcd",
            Claim::LemmaMu => "lemma-mu",
            Claim::CorTw => "cor-tw",
            Claim::LemmaOrbitRatio => "lemma-orbit-ratio",
            Claim::MergeLocal => "merge-local",
            Claim::ConjectureMu => "conjecture-mu",
            Claim::ConjectureRatio => "conjecture-ratio",
            Claim::Fixicity => "fixicity",
        }
    }

    pub fn kind(self) -> ClaimKind {
        match self {
            Claim::ConjectureMu | Claim::ConjectureRatio => ClaimKind::Conjecture,
            Claim::Fixicity => ClaimKind::Optional,
            Claim::LemmaBasic1
            | Claim::LemmaMingcd
            | Claim::LemmaMu
            | Claim::CorTw
            | Claim::LemmaOrbitRatio
            | Claim::MergeLocal => ClaimKind::Lemma,
            _ => ClaimKind::Theorem,
        }
    }

    /// Theorems and lemmas: a failure here is a defect, not a finding.
    pub fn is_proven(self) -> bool {
        matches!(self.kind(), ClaimKind::Theorem | ClaimKind::Lemma)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| format!("unknown claim `{s}`"))
    }
}

/// Named groups of claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Theorems,
    Lemmas,
    Conjectures,
    RegularOrbits,
    All,
}

impl Suite {
    pub fn claims(self) -> Vec<Claim> {
        match self {
            Suite::Theorems => Claim::ALL
                .into_iter()
                .filter(|c| c.kind() == ClaimKind::Theorem)
                .collect(),
            Suite::Lemmas => Claim::ALL
                .into_iter()
                .filter(|c| c.kind() == ClaimKind::Lemma)
                .collect(),
            Suite::Conjectures => vec![Claim::ConjectureMu, Claim::ConjectureRatio],
            Suite::RegularOrbits => vec![
                Claim::RegularOrbits,
                Claim::AdjacentRegularOrbits,
                Claim::RegularRatio,
                Claim::OrbitSizeLaw,
            ],
            Suite::All => Claim::ALL.to_vec(),
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theorems" => Ok(Suite::Theorems),
            "lemmas" => Ok(Suite::Lemmas),
            "conjectures" => Ok(Suite::Conjectures),
            "regular-orbits" => Ok(Suite::RegularOrbits),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite `{s}`")),
        }
    }
}

/// Claims named by a comma-separated list of suites or claim ids. A name
/// that is both (`regular-orbits`) means the suite.
pub fn parse_claims(spec: &str) -> Result<Vec<Claim>, String> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let claims = match part.parse::<Suite>() {
            Ok(suite) => suite.claims(),
            Err(_) => vec![part.parse::<Claim>()?],
        };
        for c in claims {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    if out.is_empty() {
        return Err("no claims selected".into());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Skipped,
    Inexact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub graph6: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycles: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub graph: String,
    pub claim: Claim,
    pub status: Status,
    pub measured: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    fn new(graph: &str, claim: Claim) -> Self {
        Verdict {
            graph: graph.to_string(),
            claim,
            status: Status::Holds,
            measured: BTreeMap::new(),
            reason: None,
            witness: None,
        }
    }

    fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.measured.insert(key.to_string(), value.into());
        self
    }

    fn skip(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.reason = Some(reason.into());
        self
    }
}

// Per-element conditions, evaluated together in one pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    MeoBound,
    RegularOrbit,
    AdjacentRegular,
    MainOrbits,
    LemmaMu,
    Ratio512,
    ConjMu,
    ConjRatio,
    SizeLaw,
    Basic1,
    CorTw,
    OrbitRatio,
    Fixicity,
    Semiprimitive,
    MinGcd,
}

const N_CHECKS: usize = 15;

impl Check {
    fn bit(self) -> u32 {
        1 << self as u32
    }
}

const ALL_CHECKS: u32 = (1 << N_CHECKS) - 1;

/// Per-element checks a claim reads from the shared pass.
fn checks_for(claim: Claim) -> u32 {
    let cs: &[Check] = match claim {
        Claim::MeoBound => &[Check::MeoBound],
        Claim::RegularOrbits => &[Check::RegularOrbit],
        Claim::AdjacentRegularOrbits => &[Check::AdjacentRegular],
        Claim::MuBound => &[Check::MainOrbits, Check::LemmaMu],
        Claim::RegularRatio => &[Check::Ratio512],
        Claim::OrbitSizeLaw => &[Check::SizeLaw],
        Claim::SemiprimitiveBound => &[Check::Semiprimitive],
        Claim::LemmaBasic1 => &[Check::Basic1],
        Claim::LemmaMingcd => &[Check::MinGcd],
        Claim::LemmaMu => &[Check::LemmaMu],
        Claim::CorTw => &[Check::CorTw],
        Claim::LemmaOrbitRatio => &[Check::OrbitRatio],
        Claim::ConjectureMu => &[Check::ConjMu],
        Claim::ConjectureRatio => &[Check::ConjRatio],
        Claim::Fixicity => &[Check::Fixicity],
        Claim::MeoLocal | Claim::SylowExponent6Valent | Claim::QuarticMerge | Claim::MergeLocal => &[],
    };
    cs.iter().fold(0, |m, c| m | c.bit())
}

type Violation = Option<(u64, Perm, String)>;

fn earlier(a: Violation, b: Violation) -> Violation {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
        (x, None) | (None, x) => x,
    }
}

/// Tallies of one element pass.
#[derive(Clone, Debug)]
struct Pass {
    first: [Violation; N_CHECKS],
    elements: u64,
    max_order: BigUint,
    max_ell: usize,
    min_mu: usize,
    min_regular_points: usize,
    max_mu_order: BigUint,
    max_fixed: usize,
    max_ratio_order_ell: BigUint,
}

impl Pass {
    fn empty() -> Self {
        Pass {
            first: std::array::from_fn(|_| None),
            elements: 0,
            max_order: BigUint::zero(),
            max_ell: 0,
            min_mu: usize::MAX,
            min_regular_points: usize::MAX,
            max_mu_order: BigUint::zero(),
            max_fixed: 0,
            max_ratio_order_ell: BigUint::zero(),
        }
    }

    fn merge(mut self, other: Pass) -> Pass {
        for (a, b) in self.first.iter_mut().zip(other.first) {
            *a = earlier(a.take(), b);
        }
        self.elements += other.elements;
        self.max_order = self.max_order.max(other.max_order);
        self.max_ell = self.max_ell.max(other.max_ell);
        self.min_mu = self.min_mu.min(other.min_mu);
        self.min_regular_points = self.min_regular_points.min(other.min_regular_points);
        self.max_mu_order = self.max_mu_order.max(other.max_mu_order);
        self.max_fixed = self.max_fixed.max(other.max_fixed);
        self.max_ratio_order_ell = self.max_ratio_order_ell.max(other.max_ratio_order_ell);
        self
    }

    fn violation(&self, c: Check) -> Option<&(u64, Perm, String)> {
        self.first[c as usize].as_ref()
    }
}

/// Graph-level quantities the per-element conditions refer to.
struct PassParams<'a> {
    mask: u32,
    g: &'a Graph,
    n: usize,
    meo_factor: Option<u64>,
    meo_local: BigUint,
    cor_tw_k: BigUint,
    semiprimitive_c: BigUint,
}

fn big(x: usize) -> BigUint {
    BigUint::from(x)
}

fn evaluate(p: &PassParams<'_>, index: u64, g: &Perm) -> Pass {
    let mut out = Pass::empty();
    out.elements = 1;
    let n = p.n;
    let cycles = g.cycles();
    let mu = cycles.len();
    let o = g.order();
    let ell = cycles.iter().map(Vec::len).max().unwrap_or(0);
    let s = cycles.iter().map(Vec::len).min().unwrap_or(0);
    let o_small = o.to_usize();
    let is_regular = |len: usize| o_small == Some(len);
    let regular_cycles = cycles.iter().filter(|c| is_regular(c.len())).count();
    let regular_points = regular_cycles * ell.max(1);
    let regular_points = if regular_cycles == 0 { 0 } else { regular_points };
    let fixed = g.fixed_points();
    let identity = g.is_identity();

    let on = |c: Check| p.mask & c.bit() != 0;
    let mut fail = |c: Check, detail: String| {
        out.first[c as usize] = Some((index, g.clone(), detail));
    };

    if let (true, Some(f)) = (on(Check::MeoBound), p.meo_factor) {
        if o > big(n) * f {
            fail(Check::MeoBound, format!("o(g) = {o} > {f}n = {}", f as usize * n));
        }
    }
    if on(Check::RegularOrbit) && regular_cycles == 0 {
        fail(Check::RegularOrbit, format!("o(g) = {o}, no orbit of that length"));
    }

    let mut orbit_of = Vec::new();
    if on(Check::AdjacentRegular) || on(Check::OrbitRatio) {
        orbit_of.resize(n, 0u32);
        for (i, c) in cycles.iter().enumerate() {
            for &v in c {
                orbit_of[v] = i as u32;
            }
        }
    }
    if on(Check::AdjacentRegular) && mu > 1 {
        for (i, c) in cycles.iter().enumerate() {
            if !is_regular(c.len()) {
                continue;
            }
            let adjacent = c.iter().any(|&u| {
                p.g.neighbours(u).iter().any(|&w| {
                    let j = orbit_of[w] as usize;
                    j != i && is_regular(cycles[j].len())
                })
            });
            if !adjacent {
                fail(
                    Check::AdjacentRegular,
                    format!("regular orbit of {} has no regular neighbour orbit", c[0]),
                );
                break;
            }
        }
    }

    let mu_o = big(mu) * &o;
    if on(Check::MainOrbits) && mu_o.clone() * 6u32 > big(17 * n) {
        fail(Check::MainOrbits, format!("6 mu o = {} > 17n = {}", mu_o.clone() * 6u32, 17 * n));
    }
    if on(Check::LemmaMu) {
        let lhs = big(mu * ell);
        let rhs = big(n - ell) * &p.meo_local + big(ell);
        if lhs > rhs {
            fail(Check::LemmaMu, format!("mu l = {lhs} > (n - l) meo_local + l = {rhs}"));
        }
    }
    if on(Check::Ratio512) && 12 * regular_points < 5 * n {
        fail(Check::Ratio512, format!("{regular_points} regular points < 5n/12"));
    }
    if on(Check::ConjMu) && mu * ell + ell > 2 * n {
        fail(Check::ConjMu, format!("mu = {mu}, l = {ell}: mu l = {} > 2n - l = {}", mu * ell, 2 * n - ell));
    }
    if on(Check::ConjRatio) && 3 * regular_points < 2 * n {
        fail(Check::ConjRatio, format!("{regular_points} regular points < 2n/3"));
    }
    if !on(Check::SizeLaw) {
    } else if regular_cycles == 0 {
        fail(Check::SizeLaw, "no regular orbit".into());
    } else if let Some(c) = cycles
        .iter()
        .find(|c| ell % c.len() != 0 || ![1, 2, 3, 4, 6].contains(&(ell / c.len())))
    {
        fail(Check::SizeLaw, format!("orbit of {} has size {} with l = {ell}", c[0], c.len()));
    }
    let m = &p.meo_local;
    if on(Check::Basic1) && !(big(ell) <= o && o <= big(s) * m && big(s) * m <= big(ell) * m) {
        fail(Check::Basic1, format!("l = {ell}, o = {o}, s = {s}, meo(G_w) = {m}"));
    }
    if on(Check::CorTw) && o > big(ell) * &p.cor_tw_k {
        fail(Check::CorTw, format!("o = {o} > k l = {} (k = {})", big(ell) * &p.cor_tw_k, p.cor_tw_k));
    }
    if let Some(detail) = on(Check::OrbitRatio).then(|| orbit_ratio_violation(p.g, cycles, &orbit_of)).flatten() {
        fail(Check::OrbitRatio, detail);
    }
    if on(Check::Fixicity) && !identity && 3 * fixed > n {
        fail(Check::Fixicity, format!("{fixed} fixed points > n/3"));
    }
    if on(Check::Semiprimitive) && o > big(ell) * &p.semiprimitive_c {
        fail(Check::Semiprimitive, format!("o = {o} > c l with c = {}", p.semiprimitive_c));
    }
    let min_gcd_ok = !on(Check::MinGcd) || match small_order(cycles) {
        Some(o) => min_gcd_small(o, cycles),
        None => min_gcd_identity_check(g),
    };
    if !min_gcd_ok {
        fail(Check::MinGcd, "o/l differs from min/gcd of stabiliser orders".into());
    }

    out.max_order = o.clone();
    out.max_ell = ell;
    if !identity {
        out.min_mu = mu;
        out.max_fixed = fixed;
    }
    out.min_regular_points = regular_points;
    out.max_mu_order = mu_o;
    if ell > 0 {
        // o / l is an integer since l divides o
        out.max_ratio_order_ell = &o / big(ell);
    }
    out
}

/// Order as a `u64`, if it fits.
fn small_order(cycles: &[Vec<usize>]) -> Option<u64> {
    cycles.iter().try_fold(1u64, |acc, c| {
        let l = c.len() as u64;
        (acc / gcd(acc, l)).checked_mul(l)
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `o/l = min/gcd` over the orbit stabiliser orders `o/|orbit|`.
fn min_gcd_small(o: u64, cycles: &[Vec<usize>]) -> bool {
    let stab = cycles.iter().map(|c| o / c.len() as u64);
    let min = stab.clone().min().unwrap_or(1);
    let g = stab.fold(0, gcd);
    let ell = cycles.iter().map(Vec::len).max().unwrap_or(1) as u128;
    o as u128 * g as u128 == ell * min as u128
}

/// Adjacent orbits of sizes `a >= b`: `a = i b` with `i` in {1,2,3}; when
/// `i != 1` each vertex of the larger orbit has one neighbour in the smaller
/// and each vertex of the smaller has `i` in the larger (so, for `i = 3`,
/// the larger orbit is the smaller one's only neighbour).
fn orbit_ratio_violation(g: &Graph, cycles: &[Vec<usize>], orbit_of: &[u32]) -> Option<String> {
    for (ui, c) in cycles.iter().enumerate() {
        let u = c[0];
        let mut seen: Vec<usize> = Vec::new();
        for &w in g.neighbours(u) {
            let vi = orbit_of[w] as usize;
            if vi == ui || seen.contains(&vi) {
                continue;
            }
            seen.push(vi);
            let (a, b) = (c.len(), cycles[vi].len());
            if a < b {
                continue;
            }
            if a % b != 0 || a / b > 3 {
                return Some(format!("adjacent orbits of sizes {a} and {b}"));
            }
            let i = a / b;
            if i == 1 {
                continue;
            }
            let into_small = g.neighbours(u).iter().filter(|&&x| orbit_of[x] as usize == vi).count();
            if into_small != 1 {
                return Some(format!("vertex {u} has {into_small} neighbours in an orbit {i} times smaller"));
            }
            let v = cycles[vi][0];
            let into_big = g.neighbours(v).iter().filter(|&&x| orbit_of[x] as usize == ui).count();
            if into_big != i {
                return Some(format!("vertex {v} has {into_big} neighbours in an orbit {i} times larger"));
            }
            if i == 3 && g.neighbours(v).iter().any(|&x| orbit_of[x] as usize != ui) {
                return Some(format!("orbit of {v} has a neighbour orbit besides the one 3 times larger"));
            }
        }
    }
    None
}

/// Which special graph, if any, a cubic graph is isomorphic to.
fn special_name(g: &Graph, aut_order: &BigUint) -> Option<&'static str> {
    let candidates: &[&'static str] = match g.order() {
        4 => &["k4"],
        6 => &["k33"],
        8 => &["q3"],
        10 => &["petersen"],
        14 => &["heawood"],
        18 => &["pappus"],
        _ => &[],
    };
    candidates.iter().copied().find(|name| {
        let h = named(name).expect("known name");
        automorphism_group(&h).order() == aut_order && are_isomorphic(g, &h)
    })
}

/// `(r, s)` such that `g` is isomorphic to `SPX(r, s)`. Candidates are those
/// of the same order; automorphism group orders are compared before running
/// the isomorphism test.
pub fn spx_parameters(g: &Graph, aut_order: &BigUint) -> Option<(usize, usize)> {
    let n = g.order();
    if n % 4 != 0 || !g.is_regular(3) {
        return None;
    }
    let mut candidates = vec![(n / 4, 1)];
    let mut s = 2;
    while (3usize << (s + 2)) <= n {
        if n % (1 << (s + 2)) == 0 {
            candidates.push((n >> (s + 2), s));
        }
        s += 1;
    }
    candidates
        .into_iter()
        .filter(|&(r, s)| r >= 3 && s < r && 2 * px_order(r, s) == n)
        .find(|&(r, s)| {
            let h = spx(r, s).expect("parameters in range");
            automorphism_group(&h).order() == aut_order && are_isomorphic(g, &h)
        })
}

/// Everything about one graph that the checks share.
pub struct GraphContext {
    pub id: String,
    pub graph: Graph,
    pub cap: usize,
    pub aut: PermGroup,
    pub connected: bool,
    pub valence: Option<usize>,
    pub vertex_transitive: bool,
    pub arc_orbits: usize,
    stabiliser: OnceLock<PermGroup>,
    stab_meo: OnceLock<Estimate<BigUint>>,
    stab_exponent: OnceLock<Estimate<BigUint>>,
    special: OnceLock<Option<&'static str>>,
    spx: OnceLock<Option<(usize, usize)>>,
    pass: OnceLock<Estimate<Pass>>,
    semiprimitive: OnceLock<Option<bool>>,
    checks: u32,
}

impl GraphContext {
    pub fn new(id: impl Into<String>, graph: Graph, cap: usize) -> Self {
        let aut = automorphism_group(&graph);
        Self::with_group(id, graph, aut, cap)
    }

    pub fn with_group(id: impl Into<String>, graph: Graph, aut: PermGroup, cap: usize) -> Self {
        let connected = graph.order() > 0 && graph.is_connected();
        let valence = graph.valence();
        let vertex_transitive = graph.order() > 0 && aut.is_transitive();
        let arc_orbits = if graph.edge_count() == 0 {
            0
        } else {
            arc_orbits(&graph, &aut).2
        };
        GraphContext {
            id: id.into(),
            graph,
            cap,
            aut,
            connected,
            valence,
            vertex_transitive,
            arc_orbits,
            stabiliser: OnceLock::new(),
            stab_meo: OnceLock::new(),
            stab_exponent: OnceLock::new(),
            special: OnceLock::new(),
            spx: OnceLock::new(),
            pass: OnceLock::new(),
            semiprimitive: OnceLock::new(),
            checks: ALL_CHECKS,
        }
    }

    /// Restricts the shared element pass to what `claims` need. Verdicts
    /// for other claims are then meaningless.
    pub fn for_claims(mut self, claims: &[Claim]) -> Self {
        self.checks = claims.iter().fold(0, |m, &c| m | checks_for(c));
        self
    }

    pub fn n(&self) -> usize {
        self.graph.order()
    }

    pub fn graph6(&self) -> String {
        encode_graph6_string(&self.graph)
    }

    pub fn is_cubic_vt(&self) -> bool {
        self.connected && self.vertex_transitive && self.valence == Some(3)
    }

    pub fn arc_transitive(&self) -> bool {
        self.vertex_transitive && self.arc_orbits == 1
    }

    /// Stabiliser of vertex 0.
    pub fn stabiliser(&self) -> &PermGroup {
        self.stabiliser.get_or_init(|| self.aut.stabiliser(0))
    }

    /// `meo` of a vertex stabiliser, maximised over vertex orbits.
    pub fn meo_local(&self) -> &Estimate<BigUint> {
        self.stab_meo.get_or_init(|| {
            if self.vertex_transitive {
                self.stabiliser().meo(self.cap)
            } else {
                self.aut.meo_local(self.cap)
            }
        })
    }

    pub fn stabiliser_exponent(&self) -> &Estimate<BigUint> {
        self.stab_exponent
            .get_or_init(|| self.stabiliser().exponent(self.cap))
    }

    /// Isomorphic to one of K4, K3,3, Q3, Petersen, Heawood, Pappus.
    pub fn special(&self) -> Option<&'static str> {
        *self
            .special
            .get_or_init(|| special_name(&self.graph, self.aut.order()))
    }

    pub fn spx(&self) -> Option<(usize, usize)> {
        *self
            .spx
            .get_or_init(|| spx_parameters(&self.graph, self.aut.order()))
    }

    /// `Some(true)` if the local action is semiprimitive; `None` if it is too
    /// large to analyse.
    pub fn locally_semiprimitive(&self) -> Option<bool> {
        *self.semiprimitive.get_or_init(|| {
            if self.n() == 0 {
                return Some(false);
            }
            let local = self.stabiliser().induced_on(self.graph.neighbours(0));
            is_semiprimitive(&local)
        })
    }

    fn cor_tw_k(&self) -> BigUint {
        let exp = &self.stabiliser_exponent().value;
        // strongest bound over the primes dividing the exponent
        factorise(exp)
            .into_iter()
            .map(|(p, a)| exp / num_traits::pow(p, a))
            .min()
            .unwrap_or_else(BigUint::one)
    }

    fn semiprimitive_c(&self) -> BigUint {
        match self.valence {
            Some(d) if d > 0 => big(d) * (1..=2 * d - 2).map(big).product::<BigUint>(),
            _ => BigUint::one(),
        }
    }

    fn pass(&self) -> &Estimate<Pass> {
        self.pass.get_or_init(|| {
            let wants = |c: Check| self.checks & c.bit() != 0;
            let params = PassParams {
                mask: self.checks,
                g: &self.graph,
                n: self.n(),
                meo_factor: match self.valence {
                    Some(3) => Some(1),
                    Some(4) => Some(9),
                    _ => None,
                },
                meo_local: if wants(Check::LemmaMu) || wants(Check::Basic1) {
                    self.meo_local().value.clone()
                } else {
                    BigUint::zero()
                },
                cor_tw_k: if wants(Check::CorTw) {
                    self.cor_tw_k()
                } else {
                    BigUint::one()
                },
                semiprimitive_c: self.semiprimitive_c(),
            };
            self.aut.map_reduce(
                self.cap,
                Pass::empty(),
                |i, g| evaluate(&params, i, g),
                Pass::merge,
            )
        })
    }

    fn witness(&self, element: Option<&Perm>, detail: impl Into<String>) -> Witness {
        Witness {
            graph6: self.graph6(),
            element: element.map(|p| p.images().to_vec()),
            cycles: element.map(Perm::cycle_notation),
            detail: detail.into(),
        }
    }

    /// Fails with the first violation of `check`, else holds or inexact.
    fn settle(&self, mut v: Verdict, check: Check) -> Verdict {
        debug_assert!(self.checks & check.bit() != 0, "check not selected for this context");
        let pass = self.pass();
        v.put("elements", pass.value.elements);
        v.put("exact", pass.exact);
        if let Some((_, g, detail)) = pass.value.violation(check) {
            v.status = Status::Fails;
            v.witness = Some(self.witness(Some(g), detail.clone()));
        } else if !pass.exact {
            v.status = Status::Inexact;
        }
        v
    }
}

const NOT_CUBIC_VT: &str = "hypothesis not met: not a connected cubic vertex-transitive graph";
const NOT_VT: &str = "hypothesis not met: automorphism group is not transitive";

/// Prime factorisation of a small positive integer.
fn factorise(n: &BigUint) -> Vec<(BigUint, usize)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= n {
        let mut a = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            a += 1;
        }
        if a > 0 {
            out.push((p.clone(), a));
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

/// Every normal subgroup transitive or semiregular. Normal subgroups are
/// generated from normal closures of conjugacy classes and their joins.
/// `None` for degree above 8.
pub fn is_semiprimitive(local: &PermGroup) -> Option<bool> {
    let d = local.degree();
    if d > 8 {
        return None;
    }
    if !local.is_transitive() {
        return Some(false);
    }
    let elements: Vec<Perm> = local.elements().collect();
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut normals: Vec<PermGroup> = Vec::new();
    let same = |a: &PermGroup, b: &PermGroup| {
        a.order() == b.order() && b.generators().iter().all(|g| a.contains(g))
    };
    for x in &elements {
        if x.is_identity() || seen.contains(x) {
            continue;
        }
        let mut class = vec![x.clone()];
        seen.insert(x.clone());
        let mut i = 0;
        while i < class.len() {
            for s in local.generators() {
                let y = s.inverse().then(&class[i]).then(s);
                if seen.insert(y.clone()) {
                    class.push(y);
                }
            }
            i += 1;
        }
        let closure = PermGroup::from_generators(d, class);
        if !normals.iter().any(|m| same(m, &closure)) {
            normals.push(closure);
        }
    }
    let mut i = 0;
    while i < normals.len() {
        for j in 0..i {
            let mut gens = normals[i].generators().to_vec();
            gens.extend_from_slice(normals[j].generators());
            let join = PermGroup::from_generators(d, gens);
            if !normals.iter().any(|m| same(m, &join)) {
                normals.push(join);
            }
        }
        i += 1;
    }
    Some(normals.iter().all(|m| {
        m.is_transitive() || (0..d).all(|x| m.stabiliser(x).is_trivial())
    }))
}

pub fn check_meo_bound(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::MeoBound);
    let factor = match ctx.valence {
        Some(3) => 1u64,
        Some(4) => 9,
        _ => return v.skip("hypothesis not met: valence is not 3 or 4"),
    };
    if !ctx.connected || !ctx.vertex_transitive {
        return v.skip("hypothesis not met: not connected and vertex-transitive");
    }
    let pass = ctx.pass();
    v.put("n", ctx.n())
        .put("valence", ctx.valence.unwrap_or(0))
        .put("meo", to_json(&pass.value.max_order))
        .put("bound", factor * ctx.n() as u64)
        .put("meo_equals_n", pass.value.max_order == big(ctx.n()));
    ctx.settle(v, Check::MeoBound)
}

pub fn check_meo_local(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::MeoLocal);
    if !ctx.is_cubic_vt() {
        return v.skip(NOT_CUBIC_VT);
    }
    let m = ctx.meo_local();
    v.put("meo_local", to_json(&m.value))
        .put("stabiliser_order", to_json(ctx.stabiliser().order()))
        .put("exact", m.exact);
    if m.value > big(6) {
        let g = ctx
            .stabiliser()
            .find_element(ctx.cap, |g| g.order() > big(6))
            .value;
        v.status = Status::Fails;
        v.witness = Some(ctx.witness(g.as_ref(), format!("stabiliser element of order {}", m.value)));
    } else if !m.exact {
        v.status = Status::Inexact;
    }
    v
}

pub fn check_regular_orbit(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::RegularOrbits);
    if !ctx.is_cubic_vt() {
        return v.skip(NOT_CUBIC_VT);
    }
    if ctx.special() == Some("k33") {
        let found = ctx.aut.element_without_regular_orbit(ctx.cap);
        v.put("exact", found.exact);
        if let Some(g) = found.value {
            v.witness = Some(ctx.witness(Some(&g), "automorphism without a regular orbit"));
        }
        return v.skip("excluded: isomorphic to K3,3");
    }
    let pass = ctx.pass();
    v.put("meo", to_json(&pass.value.max_order))
        .put("ell", pass.value.max_ell);
    let v = ctx.settle(v, Check::RegularOrbit);
    if v.status == Status::Holds && pass.value.max_order != big(pass.value.max_ell) {
        let mut v = v;
        v.status = Status::Fails;
        v.witness = Some(ctx.witness(None, "meo differs from l(G)"));
        return v;
    }
    v
}

pub fn check_adjacent_regular_orbits(ctx: &GraphContext) -> Verdict {
    let v = Verdict::new(&ctx.id, Claim::AdjacentRegularOrbits);
    if !ctx.is_cubic_vt() {
        return v.skip(NOT_CUBIC_VT);
    }
    if let Some(name) = ctx.special() {
        return v.skip(format!("excluded: isomorphic to {name}"));
    }
    ctx.settle(v, Check::AdjacentRegular)
}

pub fn check_mu_bound(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::MuBound);
    if !ctx.is_cubic_vt() {
        return v.skip(NOT_CUBIC_VT);
    }
    let pass = ctx.pass();
    v.put("n", ctx.n())
        .put("max_mu_times_order", to_json(&pass.value.max_mu_order))
        .put("meo_local", to_json(&ctx.meo_local().value));
    let v = ctx.settle(v, Check::MainOrbits);
    if v.status == Status::Fails {
        return v;
    }
    // the lemma inequality is asserted alongside
    let cross = ctx.settle(v.clone(), Check::LemmaMu);
    if cross.status == Status::Fails {
        return cross;
    }
    v
}

pub fn check_regular_ratio(ctx: &GraphContext) -> Verdict {
    ratio_claim(ctx, Claim::RegularRatio, Check::Ratio512)
}

pub fn check_conjecture_ratio(ctx: &GraphContext) -> Verdict {
    ratio_claim(ctx, Claim::ConjectureRatio, Check::ConjRatio)
}

fn ratio_claim(ctx: &GraphContext, claim: Claim, check: Check) -> Verdict {
    let mut v = Verdict::new(&ctx.id, claim);
    if !ctx.is_cubic_vt() {
        return v.skip(NOT_CUBIC_VT);
    }
    if ctx.special() == Some("k33") {
        return v.skip("excluded: isomorphic to K3,3");
    }
    if let Some((r, s)) = ctx.spx() {
        return v.skip(format!("excluded: isomorphic to spx({r},{s})"));
    }
    v.put("n", ctx.n())
        .put("min_regular_points", ctx.pass().value.min_regular_points);
    ctx.settle(v, check)
}

pub fn check_conjecture_mu(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::ConjectureMu);
    if !ctx.is_cubic_vt() {
        return v.skip(NOT_CUBIC_VT);
    }
    v.put("n", ctx.n());
    ctx.settle(v, Check::ConjMu)
}

pub fn check_orbit_size_law(ctx: &GraphContext) -> Verdict {
    excluding_k33(ctx, Claim::OrbitSizeLaw, Check::SizeLaw)
}

pub fn check_orbit_ratio(ctx: &GraphContext) -> Verdict {
    excluding_k33(ctx, Claim::LemmaOrbitRatio, Check::OrbitRatio)
}

fn excluding_k33(ctx: &GraphContext, claim: Claim, check: Check) -> Verdict {
    let v = Verdict::new(&ctx.id, claim);
    if !ctx.is_cubic_vt() {
        return v.skip(NOT_CUBIC_VT);
    }
    if ctx.special() == Some("k33") {
        return v.skip("excluded: isomorphic to K3,3");
    }
    ctx.settle(v, check)
}

pub fn check_semiprimitive_bound(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::SemiprimitiveBound);
    if !ctx.connected || !ctx.arc_transitive() {
        return v.skip("hypothesis not met: not a connected arc-transitive graph");
    }
    match ctx.locally_semiprimitive() {
        None => return v.skip("local action too large to analyse"),
        Some(false) => return v.skip("hypothesis not met: local action is not semiprimitive"),
        Some(true) => {}
    }
    let c = ctx.semiprimitive_c();
    let pass = ctx.pass();
    v.put("c", to_json(&c))
        .put("meo", to_json(&pass.value.max_order))
        .put("max_order_over_ell", to_json(&pass.value.max_ratio_order_ell));
    let v = ctx.settle(v, Check::Semiprimitive);
    if v.status != Status::Fails && pass.value.max_order > c * big(ctx.n()) {
        let mut v = v;
        v.status = Status::Fails;
        v.witness = Some(ctx.witness(None, "meo exceeds c n"));
        return v;
    }
    v
}

fn odd_prime(p: usize) -> bool {
    p > 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn check_sylow_exponent(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::SylowExponent6Valent);
    let d = ctx.valence.unwrap_or(0);
    if d % 2 != 0 || !odd_prime(d / 2) {
        return v.skip("hypothesis not met: valence is not twice an odd prime");
    }
    let edge_transitive = ctx.graph.edge_count() > 0 && crate::search::edge_orbit_count(&ctx.graph) == 1;
    if !ctx.connected || !ctx.vertex_transitive || !edge_transitive {
        return v.skip("hypothesis not met: not connected, vertex- and edge-transitive");
    }
    let p = d / 2;
    let is_p_power = move |mut x: u64| {
        while x % p as u64 == 0 {
            x /= p as u64;
        }
        x == 1
    };
    let best = ctx.stabiliser().map_reduce(
        ctx.cap,
        None,
        |i, g| {
            let o = g.order().to_u64().unwrap_or(u64::MAX);
            (o > 1 && is_p_power(o)).then(|| (o, i, g.clone()))
        },
        |a: Option<(u64, u64, Perm)>, b| match (a, b) {
            (Some(x), Some(y)) => Some(if (x.0, std::cmp::Reverse(x.1)) >= (y.0, std::cmp::Reverse(y.1)) { x } else { y }),
            (x, None) | (None, x) => x,
        },
    );
    let max = best.value.as_ref().map_or(1, |b| b.0);
    v.put("p", p)
        .put("max_p_element_order", max)
        .put("stabiliser_order", to_json(ctx.stabiliser().order()))
        .put("exact", best.exact);
    if max > (p * p) as u64 {
        v.status = Status::Fails;
        let g = best.value.map(|b| b.2);
        v.witness = Some(ctx.witness(g.as_ref(), format!("stabiliser element of order {max}")));
    } else if !best.exact {
        v.status = Status::Inexact;
    }
    v
}

pub fn check_quartic_merge(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::QuarticMerge);
    if !(ctx.connected && ctx.vertex_transitive && ctx.valence == Some(4)) {
        return v.skip("hypothesis not met: not a connected quartic vertex-transitive graph");
    }
    let Some(q) = merge_quartic_in(&ctx.graph, &ctx.aut) else {
        return v.skip("hypothesis not met: local action is not Sym(3) fixing one neighbour");
    };
    let induced = induced_group(&q.merge, &ctx.aut).expect("automorphisms preserve the matching");
    let at = induced.is_transitive() && arc_orbits(&q.merge.merged, &induced).2 == 1;
    v.put("merged_order", q.merge.merged.order())
        .put("merged_valence", q.valence.map_or(Value::Null, Value::from))
        .put("induced_arc_transitive", at);
    if !matches!(q.valence, Some(3) | Some(6)) || !at {
        v.status = Status::Fails;
        v.witness = Some(ctx.witness(
            None,
            format!("merged graph valence {:?}, arc-transitive {at}", q.valence),
        ));
    }
    v
}

pub fn check_basic1(ctx: &GraphContext) -> Verdict {
    transitive_claim(ctx, Claim::LemmaBasic1, Check::Basic1)
}

pub fn check_lemma_mu(ctx: &GraphContext) -> Verdict {
    transitive_claim(ctx, Claim::LemmaMu, Check::LemmaMu)
}

pub fn check_mingcd(ctx: &GraphContext) -> Verdict {
    transitive_claim(ctx, Claim::LemmaMingcd, Check::MinGcd)
}

pub fn check_cor_tw(ctx: &GraphContext) -> Verdict {
    let mut v = transitive_claim(ctx, Claim::CorTw, Check::CorTw);
    if ctx.vertex_transitive {
        let p_group = ctx.stabiliser().is_p_group();
        v.put("stabiliser_exponent", to_json(&ctx.stabiliser_exponent().value))
            .put("k", to_json(&ctx.cor_tw_k()))
            .put("stabiliser_p_group", p_group);
    }
    v
}

fn transitive_claim(ctx: &GraphContext, claim: Claim, check: Check) -> Verdict {
    let mut v = Verdict::new(&ctx.id, claim);
    if !ctx.vertex_transitive {
        return v.skip(NOT_VT);
    }
    v.put("meo_local", to_json(&ctx.meo_local().value));
    ctx.settle(v, check)
}

pub fn check_merge_local(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::MergeLocal);
    if !ctx.is_cubic_vt() {
        return v.skip(NOT_CUBIC_VT);
    }
    let Some(t) = invariant_matching_in(&ctx.graph, &ctx.aut) else {
        return v.skip("hypothesis not met: no invariant perfect matching (arc orbits != 2)");
    };
    let merged = merge_cubic(&ctx.graph, &t).expect("orbit is a perfect matching");
    if !merged.simple {
        return v.skip("hypothesis not met: contraction is not simple (prism or Moebius ladder)");
    }
    let local = match merge_local_action(&ctx.graph, &ctx.aut, &merged) {
        Ok(l) => l,
        Err(e) => return v.skip(format!("local action unavailable: {e}")),
    };
    v.put("action", format!("{:?}", local.action))
        .put("action_order", local.action_order)
        .put("vertex_stabiliser_order", to_json(&local.vertex_stabiliser_order))
        .put("edge_stabiliser_order", to_json(&local.edge_stabiliser_order))
        .put("pair_fixer_order", local.pair_fixer_order);
    let ok = local.action != DegreeFourAction::Other
        && big(local.pair_fixer_order as usize) == local.vertex_stabiliser_order
        && local.edge_stabiliser_order == &local.vertex_stabiliser_order * 2u32;
    if !ok {
        v.status = Status::Fails;
        v.witness = Some(ctx.witness(None, format!("{local:?}")));
    }
    v
}

pub fn check_fixicity(ctx: &GraphContext) -> Verdict {
    let mut v = Verdict::new(&ctx.id, Claim::Fixicity);
    if !ctx.is_cubic_vt() {
        return v.skip(NOT_CUBIC_VT);
    }
    if ctx.n() <= 20 {
        return v.skip("hypothesis not met: at most 20 vertices");
    }
    if let Some((r, s)) = ctx.spx() {
        return v.skip(format!("excluded: isomorphic to spx({r},{s})"));
    }
    v.put("n", ctx.n()).put("max_fixed", ctx.pass().value.max_fixed);
    ctx.settle(v, Check::Fixicity)
}

pub fn check(ctx: &GraphContext, claim: Claim) -> Verdict {
    match claim {
        Claim::MeoBound => check_meo_bound(ctx),
        Claim::MeoLocal => check_meo_local(ctx),
        Claim::RegularOrbits => check_regular_orbit(ctx),
        Claim::AdjacentRegularOrbits => check_adjacent_regular_orbits(ctx),
        Claim::MuBound => check_mu_bound(ctx),
        Claim::RegularRatio => check_regular_ratio(ctx),
        Claim::OrbitSizeLaw => check_orbit_size_law(ctx),
        Claim::SemiprimitiveBound => check_semiprimitive_bound(ctx),
        Claim::SylowExponent6Valent => check_sylow_exponent(ctx),
        Claim::QuarticMerge => check_quartic_merge(ctx),
        Claim::LemmaBasic1 => check_basic1(ctx),
        Claim::LemmaMingcd => check_mingcd(ctx),
        Claim::LemmaMu => check_lemma_mu(ctx),
        Claim::CorTw => check_cor_tw(ctx),
        Claim::LemmaOrbitRatio => check_orbit_ratio(ctx),
        Claim::MergeLocal => check_merge_local(ctx),
        Claim::ConjectureMu => check_conjecture_mu(ctx),
        Claim::ConjectureRatio => check_conjecture_ratio(ctx),
        Claim::Fixicity => check_fixicity(ctx),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub holds: usize,
    pub fails: usize,
    pub skipped: usize,
    pub inexact: usize,
}

impl Tally {
    fn add(&mut self, s: Status) {
        match s {
            Status::Holds => self.holds += 1,
            Status::Fails => self.fails += 1,
            Status::Skipped => self.skipped += 1,
            Status::Inexact => self.inexact += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub graphs: usize,
    pub verdicts: usize,
    pub total: Tally,
    pub per_claim: BTreeMap<String, Tally>,
    /// Fails among theorems and lemmas.
    pub proven_fails: usize,
    /// Fails among conjectures and optional claims.
    pub conjecture_fails: usize,
    /// No verdict depended on sampling.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub corpus: String,
    pub cap: usize,
    pub claims: Vec<Verdict>,
    pub summary: Summary,
}

impl Report {
    pub fn new(corpus: impl Into<String>, cap: usize, graphs: usize, claims: Vec<Verdict>) -> Self {
        let mut total = Tally::default();
        let mut per_claim: BTreeMap<String, Tally> = BTreeMap::new();
        let mut proven_fails = 0;
        let mut conjecture_fails = 0;
        for v in &claims {
            total.add(v.status);
            per_claim.entry(v.claim.id().to_string()).or_default().add(v.status);
            if v.status == Status::Fails {
                if v.claim.is_proven() {
                    proven_fails += 1;
                } else {
                    conjecture_fails += 1;
                }
            }
        }
        let exact = total.inexact == 0
            && claims
                .iter()
                .all(|v| v.measured.get("exact") != Some(&Value::Bool(false)));
        Report {
            corpus: corpus.into(),
            cap,
            summary: Summary {
                graphs,
                verdicts: claims.len(),
                total,
                per_claim,
                proven_fails,
                conjecture_fails,
                exact,
            },
            claims,
        }
    }

    pub fn verdicts_for(&self, claim: Claim) -> impl Iterator<Item = &Verdict> {
        self.claims.iter().filter(move |v| v.claim == claim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// `claim,holds,fails,skipped,inexact`, one row per claim.
    pub fn summary_rows(&self) -> Vec<[String; 5]> {
        self.summary
            .per_claim
            .iter()
            .map(|(c, t)| {
                [
                    c.clone(),
                    t.holds.to_string(),
                    t.fails.to_string(),
                    t.skipped.to_string(),
                    t.inexact.to_string(),
                ]
            })
            .collect()
    }
}

/// Runs every claim on every graph. Graphs are processed in parallel;
/// verdicts come back in input order, claims in the given order. A panic
/// while checking one graph becomes a skipped verdict for that graph.
pub fn scan(corpus_id: &str, corpus: &[(String, Graph)], claims: &[Claim], cap: usize) -> Report {
    let verdicts: Vec<Vec<Verdict>> = corpus
        .par_iter()
        .map(|(id, g)| {
            let run = std::panic::catch_unwind(|| {
                let ctx = GraphContext::new(id.clone(), g.clone(), cap).for_claims(claims);
                claims.iter().map(|&c| check(&ctx, c)).collect::<Vec<_>>()
            });
            run.unwrap_or_else(|_| {
                claims
                    .iter()
                    .map(|&c| Verdict::new(id, c).skip("internal error while checking this graph"))
                    .collect()
            })
        })
        .collect();
    Report::new(corpus_id, cap, corpus.len(), verdicts.into_iter().flatten().collect())
}

/// The invariants reported per graph.
#[derive(Clone, Debug, Serialize)]
pub struct GraphInvariants {
    pub n: usize,
    pub valence: Option<usize>,
    pub connected: bool,
    pub vertex_transitive: bool,
    pub arc_transitive: bool,
    #[serde(serialize_with = "crate::serde_big::serialize")]
    pub aut_order: BigUint,
    #[serde(serialize_with = "crate::serde_big::serialize")]
    pub meo: BigUint,
    pub meo_exact: bool,
    pub ell: usize,
    pub ell_exact: bool,
    /// `None` for a trivial group.
    pub mu: Option<usize>,
    pub mu_exact: bool,
    #[serde(serialize_with = "crate::serde_big::serialize")]
    pub meo_local: BigUint,
    pub meo_local_exact: bool,
}

pub fn invariants(g: &Graph, cap: usize) -> GraphInvariants {
    let aut = automorphism_group(g);
    let meo = aut.meo(cap);
    let ell = aut.ell(cap);
    let mu = aut.mu(cap).ok();
    let meo_local = aut.meo_local(cap);
    let vt = g.order() > 0 && aut.is_transitive();
    let arc_transitive = vt && g.edge_count() > 0 && arc_orbits(g, &aut).2 == 1;
    GraphInvariants {
        n: g.order(),
        valence: g.valence(),
        connected: g.order() > 0 && g.is_connected(),
        vertex_transitive: vt,
        arc_transitive,
        aut_order: aut.order().clone(),
        meo: meo.value,
        meo_exact: meo.exact,
        ell: ell.value,
        ell_exact: ell.exact,
        mu_exact: mu.as_ref().map_or(true, |m| m.exact),
        mu: mu.map(|m| m.value),
        meo_local: meo_local.value,
        meo_local_exact: meo_local.exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{circulant, gp, lex_cycle_2k1, prism, psi};
    use crate::group::DEFAULT_CAP;

    fn ctx(id: &str, g: Graph) -> GraphContext {
        GraphContext::new(id, g, DEFAULT_CAP)
    }

    #[test]
    fn claim_ids_round_trip() {
        for c in Claim::ALL {
            assert_eq!(c.id().parse::<Claim>().unwrap(), c);
        }
        assert!(parse_claims("theorems,conjecture-mu").unwrap().contains(&Claim::ConjectureMu));
        assert_eq!(parse_claims("regular-orbits").unwrap().len(), 4);
        assert!(parse_claims("nonsense").is_err());
    }

    #[test]
    fn k33_meo_and_exclusion() {
        let c = ctx("k33", named("k33").unwrap());
        let v = check_meo_bound(&c);
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.measured["meo"], Value::from(6));
        let r = check_regular_orbit(&c);
        assert_eq!(r.status, Status::Skipped);
        let w = r.witness.unwrap();
        let g = Perm::from_images(w.element.unwrap()).unwrap();
        assert!(g.is_automorphism(&c.graph));
        assert!(!crate::perm::cyclic_data(&g).has_regular_orbit());
    }

    #[test]
    fn circulant_meets_bound() {
        let c = ctx("c12", circulant(12, &[1, 6]).unwrap());
        let v = check_meo_bound(&c);
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.measured["meo_equals_n"], Value::Bool(true));
    }

    #[test]
    fn quartic_meo_bound() {
        let c = ctx("lex6", lex_cycle_2k1(6).unwrap());
        assert_eq!(check_meo_bound(&c).status, Status::Holds);
    }

    #[test]
    fn local_meo() {
        let c = ctx("heawood", named("heawood").unwrap());
        assert_eq!(check_meo_local(&c).status, Status::Holds);
        let c = ctx("prism7", prism(7).unwrap());
        let v = check_meo_local(&c);
        assert_eq!(v.measured["meo_local"], Value::from(2));
    }

    #[test]
    fn exclusions() {
        let c = ctx("heawood", named("heawood").unwrap());
        assert_eq!(check_adjacent_regular_orbits(&c).status, Status::Skipped);
        let c = ctx("spx41", spx(4, 1).unwrap());
        assert_eq!(c.spx(), Some((4, 1)));
        assert_eq!(check_regular_ratio(&c).status, Status::Skipped);
        let c = ctx("gp52", gp(5, 2).unwrap());
        assert_eq!(c.special(), Some("petersen"));
        let c = ctx("gp72", gp(7, 2).unwrap());
        assert_eq!(check_regular_ratio(&c).status, Status::Skipped);
        assert_eq!(check_regular_ratio(&c).reason.as_deref(), Some(NOT_CUBIC_VT));
    }

    #[test]
    fn petersen_and_pappus_hold() {
        for name in ["petersen", "pappus"] {
            let c = ctx(name, named(name).unwrap());
            for claim in [Claim::RegularOrbits, Claim::RegularRatio, Claim::MuBound, Claim::OrbitSizeLaw] {
                assert_eq!(check(&c, claim).status, Status::Holds, "{name} {claim}");
            }
        }
    }

    #[test]
    fn adjacent_regular_orbits() {
        for g in [gp(10, 2).unwrap(), gp(10, 3).unwrap()] {
            let c = ctx("gp", g);
            assert_eq!(check_adjacent_regular_orbits(&c).status, Status::Holds);
        }
        // an order-12 element of GP(8,3) with orbits 12 + 4: one regular orbit only
        let c = ctx("gp83", gp(8, 3).unwrap());
        let v = check_adjacent_regular_orbits(&c);
        assert_eq!(v.status, Status::Fails);
        let g = Perm::from_images(v.witness.unwrap().element.unwrap()).unwrap();
        assert!(g.is_automorphism(&c.graph));
        let mut lens = g.cycle_lengths();
        lens.sort();
        assert_eq!(lens, vec![4, 12]);
    }

    #[test]
    fn mu_bound_on_k33() {
        // o = 6 with orbits 1 + 2 + 3 gives 6 mu o = 108 > 17n = 102
        let c = ctx("k33", named("k33").unwrap());
        let v = check_mu_bound(&c);
        assert_eq!(v.status, Status::Fails);
        let g = Perm::from_images(v.witness.unwrap().element.unwrap()).unwrap();
        assert_eq!(g.order(), BigUint::from(6u32));
        assert_eq!(g.cycles().len(), 3);
        let c = ctx("k4", Graph::complete(4));
        assert_eq!(check_mu_bound(&c).status, Status::Holds);
    }

    #[test]
    fn psi_ratio() {
        let c = ctx("psi6", psi(6).unwrap());
        assert_eq!(check_regular_ratio(&c).status, Status::Holds);
    }

    #[test]
    fn semiprimitive() {
        let c = ctx("petersen", named("petersen").unwrap());
        assert_eq!(check_semiprimitive_bound(&c).status, Status::Holds);
        let c = ctx("k5", Graph::complete(5));
        assert_eq!(c.locally_semiprimitive(), Some(true));
        assert_eq!(check_semiprimitive_bound(&c).status, Status::Holds);
        // the local action of C_n[2K_1] preserves the pairs
        let c = ctx("lex5", lex_cycle_2k1(5).unwrap());
        assert_eq!(c.locally_semiprimitive(), Some(false));
        assert_eq!(check_semiprimitive_bound(&c).status, Status::Skipped);
    }

    #[test]
    fn sylow_k7() {
        let c = ctx("k7", Graph::complete(7));
        let v = check_sylow_exponent(&c);
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.measured["max_p_element_order"], Value::from(3));
        let c = ctx("k33", named("k33").unwrap());
        assert_eq!(check_sylow_exponent(&c).status, Status::Skipped);
    }

    #[test]
    fn factorisation() {
        let f = factorise(&BigUint::from(360u32));
        let f: Vec<(u64, usize)> = f.into_iter().map(|(p, a)| (p.to_u64().unwrap(), a)).collect();
        assert_eq!(f, vec![(2, 3), (3, 2), (5, 1)]);
        assert!(factorise(&BigUint::one()).is_empty());
    }

    #[test]
    fn report_tallies() {
        let corpus = vec![
            ("k4".to_string(), Graph::complete(4)),
            ("p3".to_string(), Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()),
        ];
        let r = scan("tiny", &corpus, &[Claim::MeoBound, Claim::RegularOrbits], DEFAULT_CAP);
        assert_eq!(r.claims.len(), 4);
        assert_eq!(r.claims[0].graph, "k4");
        assert_eq!(r.summary.total.holds + r.summary.total.skipped, 4);
        let empty = scan("empty", &[], &[Claim::MeoBound], DEFAULT_CAP);
        assert!(empty.claims.is_empty());
        assert_eq!(r.to_json(), scan("tiny", &corpus, &[Claim::MeoBound, Claim::RegularOrbits], DEFAULT_CAP).to_json());
    }
}
