//! Permutations of `0..n` and the orbit statistics of the cyclic group
//! they generate.
//!
//! Composition is left to right: `g.then(h)` maps `i` to `h(g(i))`, matching
//! the exponent notation `i^(gh)`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone)]
pub struct Perm {
    images: Vec<usize>,
    cycles: OnceLock<Vec<Vec<usize>>>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm::from_images_unchecked((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &x) in images.iter().enumerate() {
            if x >= n {
                return Err(Error::NotAPermutation(format!("image {x} of {i} out of range")));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation(format!("{x} is hit twice")));
            }
        }
        Ok(Perm::from_images_unchecked(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        Perm {
            images,
            cycles: OnceLock::new(),
        }
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut moved = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::NotAPermutation(format!("point {x} out of range")));
                }
                if std::mem::replace(&mut moved[x], true) {
                    return Err(Error::NotAPermutation(format!("cycles overlap at {x}")));
                }
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm::from_images_unchecked(images))
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm::from_images_unchecked(self.images.iter().map(|&x| other.images[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm::from_images_unchecked(inv)
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut result = Perm::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        result
    }

    /// Disjoint cycles including fixed points, each starting at its least
    /// point, ordered by that point.
    pub fn cycles(&self) -> &[Vec<usize>] {
        self.cycles.get_or_init(|| {
            let n = self.degree();
            let mut seen = vec![false; n];
            let mut cycles = Vec::new();
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                let mut cycle = vec![start];
                seen[start] = true;
                let mut x = self.images[start];
                while x != start {
                    seen[x] = true;
                    cycle.push(x);
                    x = self.images[x];
                }
                cycles.push(cycle);
            }
            cycles
        })
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles().iter().map(Vec::len).collect()
    }

    pub fn order(&self) -> BigUint {
        lcm_of(self.cycles().iter().map(Vec::len))
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i == x).count()
    }

    pub fn is_automorphism(&self, g: &Graph) -> bool {
        self.degree() == g.order()
            && g.edges().all(|(u, v)| g.has_edge(self.images[u], self.images[v]))
    }

    /// Cycle notation with fixed points omitted, `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let body: Vec<String> = c.iter().map(usize::to_string).collect();
                format!("({})", body.join(","))
            })
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.concat()
        }
    }
}

/// Exact lcm; machine-word arithmetic until it would overflow.
pub fn lcm_of<I: IntoIterator<Item = usize>>(values: I) -> BigUint {
    let mut small: u64 = 1;
    let mut big: Option<BigUint> = None;
    for v in values {
        let v = v as u64;
        match &mut big {
            Some(b) => *b = b.lcm(&BigUint::from(v)),
            None => {
                let g = small.gcd(&v);
                match (small / g).checked_mul(v) {
                    Some(l) => small = l,
                    None => big = Some(BigUint::from(small).lcm(&BigUint::from(v))),
                }
            }
        }
    }
    big.unwrap_or_else(|| BigUint::from(small))
}

impl PartialEq for Perm {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for Perm {}

impl Hash for Perm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl PartialOrd for Perm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Perm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.images.cmp(&other.images)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}", self.cycle_notation())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Perm::from_images(images).map_err(serde::de::Error::custom)
    }
}

/// Orbit statistics of `<g>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicOrbitData {
    #[serde(serialize_with = "crate::serde_big::serialize")]
    pub order: BigUint,
    pub longest: usize,
    pub shortest: usize,
    pub orbit_count: usize,
    /// Orbit lengths, ascending, with multiplicity.
    pub orbit_lengths: Vec<usize>,
    /// Least point of every regular orbit (length equal to the order).
    pub regular_orbit_reps: Vec<usize>,
}

impl CyclicOrbitData {
    pub fn has_regular_orbit(&self) -> bool {
        !self.regular_orbit_reps.is_empty()
    }

    /// Number of points lying on regular orbits.
    pub fn regular_points(&self) -> usize {
        // a regular orbit is necessarily a longest one
        self.regular_orbit_reps.len() * self.longest
    }
}

pub fn cyclic_data(g: &Perm) -> CyclicOrbitData {
    let cycles = g.cycles();
    let order = lcm_of(cycles.iter().map(Vec::len));
    let mut orbit_lengths: Vec<usize> = cycles.iter().map(Vec::len).collect();
    let regular_orbit_reps = cycles
        .iter()
        .filter(|c| BigUint::from(c.len()) == order)
        .map(|c| c[0])
        .collect();
    orbit_lengths.sort_unstable();
    CyclicOrbitData {
        longest: orbit_lengths.last().copied().unwrap_or(0),
        shortest: orbit_lengths.first().copied().unwrap_or(0),
        orbit_count: orbit_lengths.len(),
        orbit_lengths,
        regular_orbit_reps,
        order,
    }
}

/// Compares `o(g)/l(g)` with `min|C_w| / gcd|C_w|`, where `C_w` is the
/// stabiliser of `w` in `<g>` and so has order `o(g)/|w^<g>|`.
pub fn min_gcd_identity_check(g: &Perm) -> bool {
    let data = cyclic_data(g);
    if data.orbit_lengths.is_empty() {
        return true;
    }
    let stab: Vec<BigUint> = data
        .orbit_lengths
        .iter()
        .map(|&len| &data.order / BigUint::from(len))
        .collect();
    let min = stab.iter().min().unwrap().clone();
    let gcd = stab.iter().fold(BigUint::from(0u32), |acc, s| acc.gcd(s));
    // o/l == min/gcd  <=>  o * gcd == l * min
    &data.order * gcd == BigUint::from(data.longest) * min
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use num_traits::One;

    fn with_cycle_type(lengths: &[usize]) -> Perm {
        let mut start = 0;
        let mut cycles = Vec::new();
        for &l in lengths {
            cycles.push((start..start + l).collect::<Vec<_>>());
            start += l;
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Perm::from_cycles(start, &refs).unwrap()
    }

    #[test]
    fn cycle_type_6422() {
        let d = cyclic_data(&with_cycle_type(&[6, 4, 2, 2]));
        assert_eq!(d.order, BigUint::from(12u32));
        assert_eq!(d.longest, 6);
        assert_eq!(d.shortest, 2);
        assert_eq!(d.orbit_count, 4);
        assert!(!d.has_regular_orbit());
    }

    #[test]
    fn identity_every_orbit_regular() {
        let d = cyclic_data(&Perm::identity(7));
        assert_eq!(d.order, BigUint::one());
        assert_eq!(d.orbit_count, 7);
        assert_eq!(d.regular_orbit_reps.len(), 7);
        assert_eq!(d.regular_points(), 7);
    }

    #[test]
    fn mingcd_on_fixed_examples() {
        assert!(min_gcd_identity_check(&with_cycle_type(&[6, 4, 2])));
        assert!(min_gcd_identity_check(&with_cycle_type(&[9])));
        assert!(min_gcd_identity_check(&Perm::identity(0)));
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).image(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
        assert_eq!(a.then(&b).pow(3), Perm::identity(3));
        assert_eq!(a.then(&b).cycle_notation(), "(0,2,1)");
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_images(vec![2, 0]).is_err());
        assert!(Perm::from_cycles(3, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn lcm_overflow_promotes() {
        let primes = [
            2usize, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
        ];
        let expected = primes.iter().fold(BigUint::one(), |acc, &p| acc * BigUint::from(p));
        assert_eq!(lcm_of(primes), expected);
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Perm> {
        (1..=max_n)
            .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Perm::from_images(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn orbit_invariants(g in arb_perm(30)) {
            let d = cyclic_data(&g);
            let n = g.degree();
            prop_assert_eq!(d.orbit_lengths.iter().sum::<usize>(), n);
            prop_assert!(d.shortest <= d.longest);
            prop_assert!((&d.order % BigUint::from(d.longest)) == BigUint::from(0u32));
            prop_assert!(d.shortest * d.orbit_count <= n);
            prop_assert!(n <= d.longest * d.orbit_count);
            prop_assert_eq!(g.order(), d.order.clone());
            prop_assert!(g.pow(u64::try_from(&d.order).unwrap()).is_identity());
        }

        #[test]
        fn inverse_round_trip(g in arb_perm(20)) {
            prop_assert!(g.then(&g.inverse()).is_identity());
        }
    }
}
