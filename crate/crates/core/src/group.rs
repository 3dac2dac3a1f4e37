//! Permutation groups held as a stabiliser chain (base and strong
//! generating set), built by the deterministic Schreier-Sims algorithm.
//!
//! Element statistics (`meo`, `exponent`, ...) enumerate the group through
//! the transversal product when its order is within the element budget and
//! fall back to uniform sampling otherwise; every such result carries an
//! `exact` flag.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{cyclic_data, Perm};

/// Default element budget for exhaustive scans.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Seed for sampled scans, fixed so that reports are reproducible.
pub const SAMPLE_SEED: u64 = 0x5eed_0f0b;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `index[p]` is the position of `p` in `orbit`, if present.
    index: Vec<Option<u32>>,
    /// `reps[i]` maps the base point to `orbit[i]`; `inv[i]` is its inverse.
    reps: Vec<Perm>,
    inv: Vec<Perm>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            index: vec![None; degree],
            reps: Vec::new(),
            inv: Vec::new(),
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        let id = Perm::identity(degree);
        self.orbit.clear();
        self.reps.clear();
        self.inv.clear();
        self.index.iter_mut().for_each(|x| *x = None);
        self.orbit.push(self.base);
        self.index[self.base] = Some(0);
        self.reps.push(id.clone());
        self.inv.push(id);
        let mut head = 0;
        while head < self.orbit.len() {
            let p = self.orbit[head];
            for s in &self.gens {
                let q = s.image(p);
                if self.index[q].is_none() {
                    let rep = self.reps[head].then(s);
                    self.index[q] = Some(self.orbit.len() as u32);
                    self.orbit.push(q);
                    self.inv.push(rep.inverse());
                    self.reps.push(rep);
                }
            }
            head += 1;
        }
    }

    fn rep_index(&self, p: usize) -> Option<usize> {
        self.index[p].map(|i| i as usize)
    }
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: Vec<Level>,
    order: BigUint,
}

/// A value computed over group elements, exact when every element was
/// visited.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Estimate<T> {
    pub value: T,
    pub exact: bool,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        Self::from_generators(degree, Vec::new())
    }

    /// `Sym(n)` from a transposition and an `n`-cycle.
    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::from_cycles(degree, &[&[0, 1]]).unwrap());
        }
        if degree >= 3 {
            let cycle: Vec<usize> = (0..degree).collect();
            gens.push(Perm::from_cycles(degree, &[&cycle]).unwrap());
        }
        Self::from_generators(degree, gens)
    }

    pub fn cyclic(g: &Perm) -> Self {
        Self::from_generators(g.degree(), vec![g.clone()])
    }

    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Self {
        Self::with_base_prefix(degree, gens, &[])
    }

    /// Runs Schreier-Sims with a chain whose base starts with `prefix`.
    pub fn with_base_prefix(degree: usize, gens: Vec<Perm>, prefix: &[usize]) -> Self {
        let gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        for g in &gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        let mut chain: Vec<Level> = prefix.iter().map(|&b| Level::new(b, degree)).collect();
        for g in &gens {
            if chain.iter().all(|l| g.image(l.base) == l.base) {
                let moved = (0..degree).find(|&p| g.image(p) != p).unwrap();
                chain.push(Level::new(moved, degree));
            }
        }
        if let Some(first) = chain.first_mut() {
            first.gens = gens.clone();
        }
        // Generators fixing the first base points also generate deeper levels.
        for j in 1..chain.len() {
            let fixing: Vec<Perm> = chain[j - 1]
                .gens
                .iter()
                .filter(|g| g.image(chain[j - 1].base) == chain[j - 1].base)
                .cloned()
                .collect();
            chain[j].gens = fixing;
        }
        for level in &mut chain {
            level.rebuild_orbit(degree);
        }
        schreier_sims(degree, &mut chain);
        let order = chain
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        PermGroup {
            degree,
            gens,
            chain,
            order,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.base).collect()
    }

    /// Sizes of the basic orbits; their product is the group order.
    pub fn basic_orbit_sizes(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut all: Vec<Perm> = Vec::new();
        for level in &self.chain {
            for g in &level.gens {
                if !all.contains(g) {
                    all.push(g.clone());
                }
            }
        }
        all
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && sift(&self.chain, g.clone(), 0).0.is_identity()
    }

    /// Point stabiliser, read off a chain rebuilt with `v` as first base
    /// point.
    pub fn stabiliser(&self, v: usize) -> PermGroup {
        self.pointwise_stabiliser(&[v])
    }

    pub fn pointwise_stabiliser(&self, points: &[usize]) -> PermGroup {
        let rebuilt =
            PermGroup::with_base_prefix(self.degree, self.strong_generators(), points);
        let chain: Vec<Level> = rebuilt.chain[points.len()..].to_vec();
        let gens = chain.first().map(|l| l.gens.clone()).unwrap_or_default();
        let order = chain
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        debug_assert_eq!(&order * rebuilt.chain[..points.len()]
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len())), rebuilt.order);
        PermGroup {
            degree: self.degree,
            gens,
            chain,
            order,
        }
    }

    /// Orbit of `v` under the group.
    pub fn orbit(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![v];
        seen[v] = true;
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            for g in &self.gens {
                let q = g.image(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
            head += 1;
        }
        orbit
    }

    /// Some element mapping `from` to `to`, if one exists.
    pub fn transporter(&self, from: usize, to: usize) -> Option<Perm> {
        let rebuilt = PermGroup::with_base_prefix(self.degree, self.strong_generators(), &[from]);
        let level = &rebuilt.chain[0];
        level.rep_index(to).map(|i| level.reps[i].clone())
    }

    pub fn orbits(&self) -> OrbitPartition {
        OrbitPartition::from_generators(self.degree, &self.gens)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Uniformly random element: a product of random transversal elements.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for level in self.chain.iter().rev() {
            let i = rng.gen_range(0..level.reps.len());
            g = g.then(&level.reps[i]);
        }
        g
    }

    /// Every element exactly once, in a fixed order.
    pub fn elements(&self) -> Elements<'_> {
        Elements::new(&self.chain[..], self.degree)
    }

    /// Maps every element (or a fixed-seed sample of `cap` elements when the
    /// order exceeds `cap`) and folds the results with `reduce`, which must
    /// be associative and commutative.
    pub fn map_reduce<T, M, R>(&self, cap: usize, identity: T, map: M, reduce: R) -> Estimate<T>
    where
        T: Send + Sync + Clone,
        M: Fn(u64, &Perm) -> T + Sync,
        R: Fn(T, T) -> T + Sync + Send,
    {
        let cap = cap.max(1);
        let exact = self.order <= BigUint::from(cap);
        let value = if exact {
            match self.chain.first() {
                None => reduce(identity.clone(), map(0, &Perm::identity(self.degree))),
                Some(top) => {
                    let inner: u64 = (&self.order / BigUint::from(top.reps.len()))
                        .to_u64()
                        .expect("within cap");
                    let rest = &self.chain[1..];
                    (0..top.reps.len())
                        .into_par_iter()
                        .map(|i| {
                            let mut acc = identity.clone();
                            for (j, x) in Elements::new(rest, self.degree).enumerate() {
                                let g = x.then(&top.reps[i]);
                                acc = reduce(acc, map(i as u64 * inner + j as u64, &g));
                            }
                            acc
                        })
                        .reduce(|| identity.clone(), &reduce)
                }
            }
        } else {
            const CHUNK: usize = 4096;
            let chunks = cap.div_ceil(CHUNK);
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = StdRng::seed_from_u64(SAMPLE_SEED ^ (c as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
                    let mut acc = identity.clone();
                    for k in c * CHUNK..((c + 1) * CHUNK).min(cap) {
                        let g = self.random_element(&mut rng);
                        acc = reduce(acc, map(k as u64, &g));
                    }
                    acc
                })
                .reduce(|| identity.clone(), &reduce)
        };
        Estimate { value, exact }
    }

    /// First element (in scan order) satisfying `pred`.
    pub fn find_element<P>(&self, cap: usize, pred: P) -> Estimate<Option<Perm>>
    where
        P: Fn(&Perm) -> bool + Sync,
    {
        let found = self.map_reduce(
            cap,
            None,
            |i, g| pred(g).then(|| (i, g.clone())),
            |a: Option<(u64, Perm)>, b| match (a, b) {
                (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                (x, None) | (None, x) => x,
            },
        );
        Estimate {
            value: found.value.map(|(_, g)| g),
            exact: found.exact,
        }
    }

    /// Maximum element order.
    pub fn meo(&self, cap: usize) -> Estimate<BigUint> {
        self.map_reduce(cap, BigUint::one(), |_, g| g.order(), |a, b| a.max(b))
    }

    /// Maximum over elements of the longest orbit of the cyclic subgroup.
    pub fn ell(&self, cap: usize) -> Estimate<usize> {
        self.map_reduce(
            cap,
            0,
            |_, g| g.cycles().iter().map(Vec::len).max().unwrap_or(0),
            usize::max,
        )
    }

    /// Minimum number of cycles of a non-identity element.
    pub fn mu(&self, cap: usize) -> Result<Estimate<usize>> {
        if self.is_trivial() {
            return Err(Error::TrivialGroup);
        }
        Ok(self.map_reduce(
            cap,
            usize::MAX,
            |_, g| if g.is_identity() { usize::MAX } else { g.cycles().len() },
            usize::min,
        ))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self, cap: usize) -> Estimate<BigUint> {
        self.map_reduce(cap, BigUint::one(), |_, g| g.order(), |a, b| a.lcm(&b))
    }

    /// Maximum of `meo` over point stabilisers, one per orbit.
    pub fn meo_local(&self, cap: usize) -> Estimate<BigUint> {
        let orbits = self.orbits();
        let mut best = BigUint::one();
        let mut exact = true;
        for block in &orbits.blocks {
            let m = self.stabiliser(block[0]).meo(cap);
            exact &= m.exact;
            best = best.max(m.value);
        }
        Estimate { value: best, exact }
    }

    /// First element, in scan order, none of whose cycles has full length.
    pub fn element_without_regular_orbit(&self, cap: usize) -> Estimate<Option<Perm>> {
        self.find_element(cap, |g| !cyclic_data(g).has_regular_orbit())
    }

    /// The permutation group induced on `points` (which must be a union of
    /// orbits), renumbered `0..points.len()`.
    pub fn induced_on(&self, points: &[usize]) -> PermGroup {
        let mut pos = vec![usize::MAX; self.degree];
        for (i, &p) in points.iter().enumerate() {
            pos[p] = i;
        }
        let gens = self
            .gens
            .iter()
            .map(|g| {
                Perm::from_images(points.iter().map(|&p| pos[g.image(p)]).collect())
                    .expect("points must be invariant under the group")
            })
            .collect();
        PermGroup::from_generators(points.len(), gens)
    }

    /// `true` if the order is a power of a single prime (or 1).
    pub fn is_p_group(&self) -> bool {
        prime_power_base(&self.order).is_some() || self.is_trivial()
    }
}

/// `Some(p)` if `n = p^k` with `k >= 1`.
pub fn prime_power_base(n: &BigUint) -> Option<BigUint> {
    if n <= &BigUint::one() {
        return None;
    }
    let mut p = BigUint::from(2u32);
    let mut m = n.clone();
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            while (&m % &p).is_zero() {
                m /= &p;
            }
            return m.is_one().then_some(p);
        }
        p += 1u32;
    }
    Some(m)
}

fn sift(chain: &[Level], mut h: Perm, from: usize) -> (Perm, usize) {
    for (j, level) in chain.iter().enumerate().skip(from) {
        let b = h.image(level.base);
        match level.rep_index(b) {
            None => return (h, j),
            Some(i) => h = h.then(&level.inv[i]),
        }
    }
    (h, chain.len())
}

fn schreier_sims(degree: usize, chain: &mut Vec<Level>) {
    if chain.is_empty() {
        return;
    }
    let mut i = chain.len() - 1;
    loop {
        let mut restart = None;
        'scan: for k in 0..chain[i].orbit.len() {
            for s in 0..chain[i].gens.len() {
                let level = &chain[i];
                let gen = &level.gens[s];
                let beta_s = gen.image(level.orbit[k]);
                let j = level.rep_index(beta_s).expect("orbit closed");
                let h = level.reps[k].then(gen).then(&level.inv[j]);
                if h.is_identity() {
                    continue;
                }
                let (residue, drop) = sift(chain, h, i + 1);
                if residue.is_identity() {
                    continue;
                }
                if drop == chain.len() {
                    let moved = (0..degree).find(|&p| residue.image(p) != p).unwrap();
                    chain.push(Level::new(moved, degree));
                }
                for level in chain.iter_mut().take(drop + 1).skip(i + 1) {
                    level.gens.push(residue.clone());
                    level.rebuild_orbit(degree);
                }
                restart = Some(drop);
                break 'scan;
            }
        }
        match restart {
            Some(j) => i = j,
            None if i == 0 => break,
            None => i -= 1,
        }
    }
}

/// Depth-first enumeration of the transversal products.
pub struct Elements<'a> {
    chain: &'a [Level],
    degree: usize,
    /// `digits[l]` indexes the representative chosen at level `l`.
    digits: Vec<usize>,
    /// `partial[l]` is the product of the choices at levels `>= l`, deepest
    /// first.
    partial: Vec<Perm>,
    done: bool,
}

impl<'a> Elements<'a> {
    fn new(chain: &'a [Level], degree: usize) -> Self {
        let k = chain.len();
        let mut partial = vec![Perm::identity(degree); k + 1];
        for l in (0..k).rev() {
            partial[l] = partial[l + 1].then(&chain[l].reps[0]);
        }
        Elements {
            chain,
            degree,
            digits: vec![0; k],
            partial,
            done: false,
        }
    }
}

impl Iterator for Elements<'_> {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        if self.done {
            return None;
        }
        let current = self.partial[0].clone();
        // Advance the shallowest digit first.
        let k = self.chain.len();
        let mut l = 0;
        loop {
            if l == k {
                self.done = true;
                break;
            }
            self.digits[l] += 1;
            if self.digits[l] < self.chain[l].reps.len() {
                break;
            }
            self.digits[l] = 0;
            l += 1;
        }
        if !self.done {
            for m in (0..=l).rev() {
                self.partial[m] = self.partial[m + 1].then(&self.chain[m].reps[self.digits[m]]);
            }
        }
        debug_assert_eq!(current.degree(), self.degree);
        Some(current)
    }
}

/// A partition of `0..n` into blocks, ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub blocks: Vec<Vec<usize>>,
    pub block_of: Vec<usize>,
}

impl OrbitPartition {
    pub fn from_generators(n: usize, gens: &[Perm]) -> Self {
        let mut dsu = DisjointSets::new(n);
        for g in gens {
            for p in 0..n {
                dsu.union(p, g.image(p));
            }
        }
        let mut block_of = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut root_block = vec![usize::MAX; n];
        for p in 0..n {
            let r = dsu.find(p);
            if root_block[r] == usize::MAX {
                root_block[r] = blocks.len();
                blocks.push(Vec::new());
            }
            block_of[p] = root_block[r];
            blocks[root_block[r]].push(p);
        }
        OrbitPartition { blocks, block_of }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 0..8usize {
            let g = PermGroup::symmetric(n);
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(g.order_u64(), Some(fact));
        }
    }

    #[test]
    fn elements_are_distinct_and_complete() {
        let g = PermGroup::symmetric(5);
        let all: HashSet<Perm> = g.elements().collect();
        assert_eq!(all.len(), 120);
        assert!(all.iter().all(|x| g.contains(x)));
    }

    #[test]
    fn dihedral_group() {
        let r = cyc(6, &[&[0, 1, 2, 3, 4, 5]]);
        let s = cyc(6, &[&[1, 5], &[2, 4]]);
        let d = PermGroup::from_generators(6, vec![r, s]);
        assert_eq!(d.order_u64(), Some(12));
        assert_eq!(d.stabiliser(0).order_u64(), Some(2));
        assert_eq!(d.meo(DEFAULT_CAP).value, BigUint::from(6u32));
        assert_eq!(d.meo_local(DEFAULT_CAP).value, BigUint::from(2u32));
        assert_eq!(d.exponent(DEFAULT_CAP).value, BigUint::from(6u32));
        assert_eq!(d.mu(DEFAULT_CAP).unwrap().value, 1);
        assert!(d.is_transitive());
    }

    #[test]
    fn cyclic_group_statistics() {
        let c = PermGroup::cyclic(&cyc(7, &[&[0, 1, 2, 3, 4, 5, 6]]));
        assert_eq!(c.ell(DEFAULT_CAP).value, 7);
        assert_eq!(c.mu(DEFAULT_CAP).unwrap().value, 1);
    }

    #[test]
    fn trivial_group() {
        let t = PermGroup::trivial(4);
        assert!(t.is_trivial());
        assert_eq!(t.meo(DEFAULT_CAP).value, BigUint::one());
        assert_eq!(t.mu(DEFAULT_CAP), Err(Error::TrivialGroup));
        assert!(t.stabiliser(2).is_trivial());
        assert_eq!(t.orbits().len(), 4);
        assert_eq!(t.elements().count(), 1);
    }

    #[test]
    fn elementary_abelian_exponent() {
        let gens = vec![cyc(6, &[&[0, 1]]), cyc(6, &[&[2, 3]]), cyc(6, &[&[4, 5]])];
        let e = PermGroup::from_generators(6, gens);
        assert_eq!(e.order_u64(), Some(8));
        assert_eq!(e.exponent(DEFAULT_CAP).value, BigUint::from(2u32));
        assert!(e.is_p_group());
    }

    #[test]
    fn s4_exponent_twelve() {
        let s4 = PermGroup::symmetric(4);
        assert_eq!(s4.exponent(DEFAULT_CAP).value, BigUint::from(12u32));
        assert!(!s4.is_p_group());
    }

    #[test]
    fn orbit_stabiliser_holds() {
        let g = PermGroup::from_generators(
            8,
            vec![cyc(8, &[&[0, 1, 2, 3]]), cyc(8, &[&[0, 1]]), cyc(8, &[&[4, 5, 6]])],
        );
        for v in 0..8 {
            let stab = g.stabiliser(v);
            assert_eq!(stab.order() * BigUint::from(g.orbit(v).len()), *g.order());
            assert!(stab.generators().iter().all(|h| h.image(v) == v));
        }
    }

    #[test]
    fn sampling_is_flagged_inexact_and_deterministic() {
        let s6 = PermGroup::symmetric(6);
        let a = s6.meo(100);
        let b = s6.meo(100);
        assert!(!a.exact);
        assert_eq!(a, b);
        assert!(a.value <= BigUint::from(6u32));
        let full = s6.meo(720);
        assert!(full.exact);
        assert_eq!(full.value, BigUint::from(6u32));
    }

    #[test]
    fn transporter_maps_points() {
        let s5 = PermGroup::symmetric(5);
        let t = s5.transporter(1, 4).unwrap();
        assert_eq!(t.image(1), 4);
        let fixed = PermGroup::from_generators(4, vec![cyc(4, &[&[0, 1]])]);
        assert!(fixed.transporter(0, 3).is_none());
    }

    #[test]
    fn prime_powers() {
        let pp = |n: u32| prime_power_base(&BigUint::from(n)).map(|p| p.to_u32().unwrap());
        assert_eq!(pp(1), None);
        assert_eq!(pp(8), Some(2));
        assert_eq!(pp(27), Some(3));
        assert_eq!(pp(13), Some(13));
        assert_eq!(pp(12), None);
    }
}
