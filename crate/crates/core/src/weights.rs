//! Weight lattice of type C_l.
//!
//! Weights are points of ½ℤ^l written in the orthonormal ε-basis. They are
//! stored as doubled integer coordinates so that no rational arithmetic is
//! ever needed. The fundamental weights are `ϖ_i = ε_1 + … + ε_i`, and the
//! simple roots are `α_i = ε_i − ε_{i+1}` (i < l) and `α_l = 2ε_l`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::half::Half;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    doubled: Vec<i64>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight { doubled: vec![0; rank] }
    }

    /// Builds a weight from doubled ε-coordinates (entry k is `2·a_k`).
    pub fn from_doubled(doubled: Vec<i64>) -> Result<Self> {
        if doubled.is_empty() {
            return Err(Error::Domain("a weight needs rank at least 1".into()));
        }
        Ok(Weight { doubled })
    }

    pub fn from_epsilon(coords: &[Half]) -> Result<Self> {
        Self::from_doubled(coords.iter().map(|c| c.doubled()).collect())
    }

    /// `Σ λ_i ϖ_i` in ε-coordinates, i.e. `a_k = Σ_{i≥k} λ_i`.
    pub fn from_fundamental(coeffs: &[Half], rank: usize) -> Result<Self> {
        if coeffs.len() != rank {
            return Err(Error::Rank { expected: rank, found: coeffs.len() });
        }
        let mut doubled = vec![0; rank];
        let mut acc = 0;
        for k in (0..rank).rev() {
            acc += coeffs[k].doubled();
            doubled[k] = acc;
        }
        Self::from_doubled(doubled)
    }

    /// `ε_k` for `k ∈ 1..=rank`.
    pub fn epsilon(rank: usize, k: usize) -> Self {
        assert!((1..=rank).contains(&k), "ε index {k} out of range for rank {rank}");
        let mut w = Weight::zero(rank);
        w.doubled[k - 1] = 2;
        w
    }

    /// `ϖ_k` for `k ∈ 0..=rank`, with `ϖ_0 = 0`.
    pub fn fundamental(rank: usize, k: usize) -> Self {
        assert!(k <= rank, "fundamental weight index {k} out of range for rank {rank}");
        let mut w = Weight::zero(rank);
        w.doubled[..k].fill(2);
        w
    }

    /// Half-sum of positive roots: ε-coordinates `(l, l−1, …, 1)`.
    pub fn rho(rank: usize) -> Self {
        Weight { doubled: (1..=rank as i64).rev().map(|c| 2 * c).collect() }
    }

    /// Simple root `α_k`, `k ∈ 1..=rank`.
    pub fn simple_root(rank: usize, k: usize) -> Self {
        assert!((1..=rank).contains(&k));
        let mut w = Weight::zero(rank);
        if k < rank {
            w.doubled[k - 1] = 2;
            w.doubled[k] = -2;
        } else {
            w.doubled[k - 1] = 4;
        }
        w
    }

    pub fn rank(&self) -> usize {
        self.doubled.len()
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn epsilon_coords(&self) -> Vec<Half> {
        self.doubled.iter().map(|&d| Half::from_doubled(d)).collect()
    }

    /// Inverse basis change: `λ_i = a_i − a_{i+1}` for `i < l`, `λ_l = a_l`.
    pub fn fundamental_coords(&self) -> Vec<Half> {
        let l = self.rank();
        (0..l)
            .map(|i| {
                let next = if i + 1 < l { self.doubled[i + 1] } else { 0 };
                Half::from_doubled(self.doubled[i] - next)
            })
            .collect()
    }

    pub fn ensure_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::Rank { expected: rank, found: self.rank() });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.doubled.iter().all(|&d| d == 0)
    }

    pub fn is_dominant_integral(&self) -> bool {
        self.fundamental_coords()
            .iter()
            .all(|c| c.as_integer().is_some_and(|n| n >= 0))
    }

    /// Membership in the set of highest weights of bounded-multiplicity
    /// modules: `λ_i ∈ ℕ₀` for `i < l`, `λ_l ∈ ℤ + ½` and
    /// `λ_{l−1} + 2λ_l + 3 > 0`. Needs rank at least 2.
    pub fn is_in_a(&self) -> bool {
        let l = self.rank();
        if l < 2 {
            return false;
        }
        let f = self.fundamental_coords();
        let head_ok = f[..l - 1].iter().all(|c| c.as_integer().is_some_and(|n| n >= 0));
        let last = f[l - 1];
        // doubled form of λ_{l−1} + 2λ_l + 3
        let bound = f[l - 2].doubled() + 2 * last.doubled() + 6;
        head_ok && last.is_half_odd() && bound > 0
    }

    /// Representative of the W-orbit in the dominant chamber: absolute values
    /// sorted in decreasing order.
    pub fn dominant_conjugate(&self) -> Weight {
        let mut d: Vec<i64> = self.doubled.iter().map(|x| x.abs()).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        Weight { doubled: d }
    }

    /// Euclidean product of doubled coordinates, i.e. `4·(self, other)`.
    pub fn dot_doubled(&self, other: &Weight) -> i64 {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        self.doubled.iter().zip(&other.doubled).map(|(a, b)| a * b).sum()
    }

    /// Coordinates of `self` in the simple-root basis, if `self` lies in the
    /// root lattice. Entries may be negative.
    pub fn root_coords(&self) -> Option<Vec<i64>> {
        let l = self.rank();
        let mut out = Vec::with_capacity(l);
        let mut partial = 0;
        for (k, &d) in self.doubled.iter().enumerate() {
            partial += d;
            let den = if k + 1 < l { 2 } else { 4 };
            if partial % den != 0 {
                return None;
            }
            out.push(partial / den);
        }
        Some(out)
    }

    /// Fundamental shorthand used in tables, e.g. `(0 1 -3/2)`.
    pub fn shorthand(&self) -> String {
        let parts: Vec<String> = self.fundamental_coords().iter().map(Half::to_string).collect();
        format!("({})", parts.join(" "))
    }
}

/// Expresses `top − w = Σ c_i α_i`; present only when every `c_i ∈ ℕ₀`.
pub fn cone_coords(top: &Weight, w: &Weight) -> Option<Vec<u64>> {
    if top.rank() != w.rank() {
        return None;
    }
    let coords = (top - w).root_coords()?;
    coords.into_iter().map(|c| u64::try_from(c).ok()).collect()
}

/// Simple-root height of `w` below `top` (`Σ c_i`), if `w` lies in the cone.
pub fn depth_below(top: &Weight, w: &Weight) -> Option<u32> {
    cone_coords(top, w).map(|c| c.iter().sum::<u64>() as u32)
}

/// Least weight `t` with both `a` and `b` in the downward cone of `t`.
/// Absent when `a − b` is outside the root lattice.
pub fn cone_join(a: &Weight, b: &Weight) -> Option<Weight> {
    if a.rank() != b.rank() {
        return None;
    }
    let l = a.rank();
    let diff = (b - a).root_coords()?;
    let mut t = a.clone();
    for (k, c) in diff.into_iter().enumerate() {
        if c > 0 {
            let step = Weight::simple_root(l, k + 1);
            for _ in 0..c {
                t = &t + &step;
            }
        }
    }
    Some(t)
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eps: Vec<String> = self.epsilon_coords().iter().map(Half::to_string).collect();
        write!(f, "ε[{}]", eps.join(", "))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.shorthand())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        Weight { doubled: self.doubled.iter().zip(&rhs.doubled).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        Weight { doubled: self.doubled.iter().zip(&rhs.doubled).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { doubled: self.doubled.iter().map(|a| -a).collect() }
    }
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    fundamental: Vec<Half>,
    epsilon: Vec<Half>,
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        WeightRepr { fundamental: self.fundamental_coords(), epsilon: self.epsilon_coords() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = WeightRepr::deserialize(deserializer)?;
        let w = Weight::from_epsilon(&repr.epsilon).map_err(D::Error::custom)?;
        if w.fundamental_coords() != repr.fundamental {
            return Err(D::Error::custom("fundamental and epsilon coordinates disagree"));
        }
        Ok(w)
    }
}

/// A positive root of C_l. Indices are 0-based and `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Root {
    /// `ε_i − ε_j`
    Difference(usize, usize),
    /// `ε_i + ε_j`
    Sum(usize, usize),
    /// `2ε_i`
    Long(usize),
}

impl Root {
    pub fn weight(&self, rank: usize) -> Weight {
        let mut d = vec![0; rank];
        match *self {
            Root::Difference(i, j) => {
                d[i] = 2;
                d[j] = -2;
            }
            Root::Sum(i, j) => {
                d[i] = 2;
                d[j] = 2;
            }
            Root::Long(i) => d[i] = 4,
        }
        Weight { doubled: d }
    }

    /// `⟨w, α∨⟩` as an element of ½ℤ.
    pub fn coroot_pairing(&self, w: &Weight) -> Half {
        let d = w.doubled();
        Half::from_doubled(match *self {
            Root::Difference(i, j) => d[i] - d[j],
            Root::Sum(i, j) => d[i] + d[j],
            Root::Long(i) => d[i],
        })
    }
}

/// The `l²` positive roots of C_l in a fixed order.
pub fn positive_roots(rank: usize) -> Vec<Root> {
    let mut roots = Vec::with_capacity(rank * rank);
    for i in 0..rank {
        for j in i + 1..rank {
            roots.push(Root::Difference(i, j));
            roots.push(Root::Sum(i, j));
        }
        roots.push(Root::Long(i));
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(s: &str) -> Half {
        s.parse().unwrap()
    }

    fn hs(items: &[&str]) -> Vec<Half> {
        items.iter().map(|s| h(s)).collect()
    }

    #[test]
    fn from_fundamental_examples() {
        let w = Weight::from_fundamental(&hs(&["0", "0", "-1/2"]), 3).unwrap();
        assert_eq!(w.epsilon_coords(), hs(&["-1/2", "-1/2", "-1/2"]));

        let w = Weight::from_fundamental(&hs(&["0", "0", "0", "0"]), 4).unwrap();
        assert!(w.is_zero());

        let w = Weight::from_fundamental(&hs(&["0", "1", "-3/2"]), 3).unwrap();
        assert_eq!(w.epsilon_coords(), hs(&["-1/2", "-1/2", "-3/2"]));

        assert_eq!(
            Weight::from_fundamental(&hs(&["0", "1"]), 3),
            Err(Error::Rank { expected: 3, found: 2 })
        );
    }

    #[test]
    fn fundamental_coords_examples() {
        let w = Weight::from_epsilon(&hs(&["1/2", "-1/2", "-1/2"])).unwrap();
        assert_eq!(w.fundamental_coords(), hs(&["1", "0", "-1/2"]));
        assert_eq!(Weight::zero(3).fundamental_coords(), hs(&["0", "0", "0"]));
        let w = Weight::from_epsilon(&hs(&["-1/2", "-1/2", "-3/2"])).unwrap();
        assert_eq!(w.fundamental_coords(), hs(&["0", "1", "-3/2"]));
    }

    #[test]
    fn dominance_and_set_a() {
        assert!(Weight::fundamental(3, 2).is_dominant_integral());
        let spinor = Weight::from_fundamental(&hs(&["0", "0", "-1/2"]), 3).unwrap();
        assert!(!spinor.is_dominant_integral());
        let w = &Weight::fundamental(3, 1) + &(&Weight::fundamental(3, 3) + &Weight::fundamental(3, 3));
        assert!(w.is_dominant_integral());

        assert!(spinor.is_in_a());
        let minus = Weight::from_fundamental(&hs(&["0", "1", "-3/2"]), 3).unwrap();
        assert!(minus.is_in_a());
        let boundary = Weight::from_fundamental(&hs(&["0", "0", "-3/2"]), 3).unwrap();
        assert!(!boundary.is_in_a());
        assert!(!Weight::zero(3).is_in_a());
    }

    #[test]
    fn cone_coords_examples() {
        let top = Weight::from_fundamental(&hs(&["0", "-1/2"]), 2).unwrap();
        assert_eq!(cone_coords(&top, &top), Some(vec![0, 0]));

        let w = &top - &(&Weight::epsilon(2, 2) + &Weight::epsilon(2, 2));
        assert_eq!(cone_coords(&top, &w), Some(vec![0, 1]));
        assert_eq!(depth_below(&top, &w), Some(1));

        assert_eq!(cone_coords(&Weight::zero(2), &Weight::epsilon(2, 1)), None);
        // ε_l is outside the root lattice
        assert_eq!(cone_coords(&Weight::zero(2), &-&Weight::epsilon(2, 2)), None);
    }

    #[test]
    fn rho_is_sum_of_fundamental_weights() {
        for l in 1..=8 {
            let sum = (1..=l).fold(Weight::zero(l), |acc, k| &acc + &Weight::fundamental(l, k));
            assert_eq!(sum, Weight::rho(l));
            let expected: Vec<Half> = (1..=l as i64).rev().map(Half::from_int).collect();
            assert_eq!(Weight::rho(l).epsilon_coords(), expected);
        }
    }

    #[test]
    fn positive_root_count_and_heights() {
        for l in 1..=6 {
            let roots = positive_roots(l);
            assert_eq!(roots.len(), l * l);
            for r in roots {
                assert!(depth_below(&Weight::zero(l), &-&r.weight(l)).unwrap() >= 1);
            }
        }
        // simple roots have height one
        for l in 1..=5 {
            for k in 1..=l {
                assert_eq!(depth_below(&Weight::simple_root(l, k), &Weight::zero(l)), Some(1));
            }
        }
    }

    #[test]
    fn coroot_pairings_by_kind() {
        let w = Weight::from_epsilon(&hs(&["3", "1/2", "-1"])).unwrap();
        assert_eq!(Root::Difference(0, 1).coroot_pairing(&w), h("5/2"));
        assert_eq!(Root::Sum(1, 2).coroot_pairing(&w), h("-1/2"));
        assert_eq!(Root::Long(2).coroot_pairing(&w), h("-1"));
    }

    #[test]
    fn cone_join_is_an_upper_bound() {
        let a = Weight::epsilon(3, 1);
        let b = Weight::epsilon(3, 2);
        let t = cone_join(&a, &b).unwrap();
        assert_eq!(t, a);
        assert!(cone_coords(&t, &b).is_some());
        let c = -&Weight::epsilon(3, 3);
        assert!(cone_join(&a, &c).is_some());
        assert!(cone_join(&Weight::zero(3), &Weight::epsilon(3, 3)).is_none());
    }

    #[test]
    fn json_shape() {
        let w = Weight::from_fundamental(&hs(&["0", "1", "-3/2"]), 3).unwrap();
        let v = serde_json::to_value(&w).unwrap();
        assert_eq!(v["fundamental"], serde_json::json!(["0", "1", "-3/2"]));
        assert_eq!(v["epsilon"], serde_json::json!(["-1/2", "-1/2", "-3/2"]));
        let back: Weight = serde_json::from_value(v).unwrap();
        assert_eq!(back, w);
    }

    fn arb_weight() -> impl Strategy<Value = Weight> {
        (1usize..=6).prop_flat_map(|l| {
            proptest::collection::vec(-20i64..20, l)
                .prop_map(|d| Weight::from_doubled(d).unwrap())
        })
    }

    /// Direct transcription of the three membership clauses.
    fn in_a_reference(f: &[Half]) -> bool {
        let l = f.len();
        let clause_naturals = f[..l - 1].iter().all(|c| c.doubled() >= 0 && c.doubled() % 2 == 0);
        let clause_half = f[l - 1].doubled().rem_euclid(2) == 1;
        // λ_{l−1} + 2λ_l + 3 > 0, with everything doubled
        let clause_bound = f[l - 2].doubled() + 2 * f[l - 1].doubled() + 6 > 0;
        clause_naturals && clause_half && clause_bound
    }

    proptest! {
        #[test]
        fn basis_round_trip(w in arb_weight()) {
            let back = Weight::from_fundamental(&w.fundamental_coords(), w.rank()).unwrap();
            prop_assert_eq!(back, w);
        }

        #[test]
        fn cone_coords_reconstruct(top in arb_weight(), steps in proptest::collection::vec(0u64..4, 6)) {
            let l = top.rank();
            let mut w = top.clone();
            for k in 0..l {
                for _ in 0..steps[k] {
                    w = &w - &Weight::simple_root(l, k + 1);
                }
            }
            let c = cone_coords(&top, &w).unwrap();
            prop_assert_eq!(&c[..], &steps[..l]);
            let mut rebuilt = top.clone();
            for (k, &ck) in c.iter().enumerate() {
                for _ in 0..ck {
                    rebuilt = &rebuilt - &Weight::simple_root(l, k + 1);
                }
            }
            prop_assert_eq!(rebuilt, w);
        }

        #[test]
        fn set_a_matches_clauses(l in 2usize..=6, seed in proptest::collection::vec(-6i64..8, 6)) {
            let f: Vec<Half> = seed[..l].iter().map(|&s| Half::from_doubled(s)).collect();
            let w = Weight::from_fundamental(&f, l).unwrap();
            prop_assert_eq!(w.is_in_a(), in_a_reference(&f));
        }
    }
}
