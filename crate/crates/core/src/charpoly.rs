//! Exact truncated formal characters.
//!
//! A [`FormalCharacter`] is a finite map `weight → multiplicity` whose
//! support lies in the downward cone `top − ℕ₀{α_1, …, α_l}`. Truncation is by
//! simple-root height below `top`: a character with precision
//! `Truncated(d)` is exact on every weight of depth `≤ d` and stores nothing
//! deeper. `Complete` characters (finite-dimensional modules, finite
//! numerators) are exact everywhere.
//!
//! Because cone depths are additive under addition of weights, a product
//! truncated at depth `d` below `top_a + top_b` only needs each factor to be
//! exact to depth `d`; a complete factor imposes no bound at all.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::weights::{cone_join, depth_below, positive_roots, Root, Weight};
use crate::weyl::integral_subgroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    Complete,
    Truncated(u32),
}

impl Precision {
    pub fn depth(self) -> Option<u32> {
        match self {
            Precision::Complete => None,
            Precision::Truncated(d) => Some(d),
        }
    }

    fn shifted(self, by: u32) -> Precision {
        match self {
            Precision::Complete => Precision::Complete,
            Precision::Truncated(d) => Precision::Truncated(d + by),
        }
    }

    fn meet(self, other: Precision) -> Precision {
        match (self, other) {
            (Precision::Complete, p) | (p, Precision::Complete) => p,
            (Precision::Truncated(a), Precision::Truncated(b)) => Precision::Truncated(a.min(b)),
        }
    }

    fn admits(self, depth: u32) -> bool {
        self.depth().is_none_or(|d| depth <= d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCharacter {
    top: Weight,
    precision: Precision,
    coeffs: HashMap<Weight, BigInt>,
}

/// First disagreement found by [`FormalCharacter::first_mismatch`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub weight: Weight,
    pub depth: u32,
    pub left: BigInt,
    pub right: BigInt,
}

impl FormalCharacter {
    pub fn zero(top: Weight, precision: Precision) -> Self {
        FormalCharacter { top, precision, coeffs: HashMap::new() }
    }

    /// The complete character `e^w`.
    pub fn monomial(w: Weight) -> Self {
        let coeffs = HashMap::from([(w.clone(), BigInt::one())]);
        FormalCharacter { top: w, precision: Precision::Complete, coeffs }
    }

    /// Character of the trivial module.
    pub fn trivial(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank))
    }

    /// Accumulates terms. Every weight must lie in the cone below `top`;
    /// terms deeper than a truncated precision are rejected.
    pub fn from_terms<I>(top: Weight, precision: Precision, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Weight, BigInt)>,
    {
        let mut out = Self::zero(top, precision);
        for (w, c) in terms {
            w.ensure_rank(out.top.rank())?;
            let depth = depth_below(&out.top, &w).ok_or_else(|| {
                Error::Domain(format!("{w:?} is not below the top {:?}", out.top))
            })?;
            if !precision.admits(depth) {
                return Err(Error::Domain(format!(
                    "{w:?} lies at depth {depth}, beyond the declared precision {precision:?}"
                )));
            }
            out.accumulate(w, c);
        }
        Ok(out)
    }

    fn accumulate(&mut self, w: Weight, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(w) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn top(&self) -> &Weight {
        &self.top
    }

    pub fn rank(&self) -> usize {
        self.top.rank()
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Depth to which the character is exact; `None` when complete.
    pub fn guaranteed_depth(&self) -> Option<u32> {
        self.precision.depth()
    }

    pub fn coeff(&self, w: &Weight) -> BigInt {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn depth_of(&self, w: &Weight) -> Option<u32> {
        depth_below(&self.top, w)
    }

    /// Terms ordered by depth below the top, then lexicographically by
    /// ε-coordinates.
    pub fn sorted_terms(&self) -> Vec<(u32, &Weight, &BigInt)> {
        let mut terms: Vec<_> = self
            .coeffs
            .iter()
            .map(|(w, c)| (depth_below(&self.top, w).expect("support invariant"), w, c))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
        terms
    }

    pub fn total_mass(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn max_coefficient(&self) -> BigInt {
        self.coeffs.values().max().cloned().unwrap_or_default()
    }

    pub fn min_coefficient(&self) -> BigInt {
        self.coeffs.values().min().cloned().unwrap_or_default()
    }

    /// Same character described relative to a higher top.
    pub fn retop(&self, new_top: &Weight) -> Result<Self> {
        let shift = depth_below(new_top, &self.top).ok_or_else(|| {
            Error::Domain(format!("{:?} is not above {:?}", new_top, self.top))
        })?;
        Ok(FormalCharacter {
            top: new_top.clone(),
            precision: self.precision.shifted(shift),
            coeffs: self.coeffs.clone(),
        })
    }

    /// Drops every term deeper than `depth`.
    pub fn truncate(&self, depth: u32) -> Result<Self> {
        if let Some(available) = self.guaranteed_depth() {
            if depth > available {
                return Err(Error::Truncation { requested: depth, available });
            }
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(w, _)| depth_below(&self.top, w).is_some_and(|d| d <= depth))
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        Ok(FormalCharacter { top: self.top.clone(), precision: Precision::Truncated(depth), coeffs })
    }

    /// Coefficient-wise sum over the least common cone top.
    pub fn add(&self, other: &Self) -> Result<Self> {
        other.top.ensure_rank(self.rank())?;
        let top = cone_join(&self.top, &other.top).ok_or_else(|| {
            Error::Domain(format!(
                "tops {:?} and {:?} differ by a vector outside the root lattice",
                self.top, other.top
            ))
        })?;
        let a = self.retop(&top)?;
        let b = other.retop(&top)?;
        let precision = a.precision.meet(b.precision);
        let mut out = FormalCharacter { top, precision, coeffs: a.coeffs };
        for (w, c) in b.coeffs {
            out.accumulate(w, c);
        }
        if let Some(d) = precision.depth() {
            out = out.truncate(d)?;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        let coeffs = if factor.is_zero() {
            HashMap::new()
        } else {
            self.coeffs.iter().map(|(w, c)| (w.clone(), c * factor)).collect()
        };
        FormalCharacter { top: self.top.clone(), precision: self.precision, coeffs }
    }

    fn depth_sorted(&self) -> Vec<(u32, &Weight, &BigInt)> {
        self.sorted_terms()
    }

    /// Cauchy product truncated to `result_depth` below `top_a + top_b`.
    pub fn mul(&self, other: &Self, result_depth: u32) -> Result<Self> {
        other.top.ensure_rank(self.rank())?;
        if let Some(available) = self.precision.meet(other.precision).depth() {
            if result_depth > available {
                return Err(Error::Truncation { requested: result_depth, available });
            }
        }
        Guards::current().check_cone(self.rank(), result_depth)?;
        let top = &self.top + &other.top;
        let coeffs = Self::convolve(&self.depth_sorted(), &other.depth_sorted(), Some(result_depth));
        Ok(FormalCharacter { top, precision: Precision::Truncated(result_depth), coeffs })
    }

    /// Untruncated product of two complete characters.
    pub fn mul_exact(&self, other: &Self) -> Result<Self> {
        other.top.ensure_rank(self.rank())?;
        if self.precision != Precision::Complete || other.precision != Precision::Complete {
            return Err(Error::Domain("mul_exact needs two complete characters".into()));
        }
        let top = &self.top + &other.top;
        let coeffs = Self::convolve(&self.depth_sorted(), &other.depth_sorted(), None);
        Ok(FormalCharacter { top, precision: Precision::Complete, coeffs })
    }

    fn convolve(
        a: &[(u32, &Weight, &BigInt)],
        b: &[(u32, &Weight, &BigInt)],
        limit: Option<u32>,
    ) -> HashMap<Weight, BigInt> {
        let mut out: HashMap<Weight, BigInt> = HashMap::new();
        for &(da, wa, ca) in a {
            if limit.is_some_and(|d| da > d) {
                break;
            }
            for &(db, wb, cb) in b {
                if limit.is_some_and(|d| da + db > d) {
                    break;
                }
                *out.entry(wa + wb).or_default() += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Compares two characters on every weight of depth `≤ depth` below their
    /// common top. Both must be exact to that depth.
    pub fn first_mismatch(&self, other: &Self, depth: u32) -> Result<Option<Mismatch>> {
        other.top.ensure_rank(self.rank())?;
        let top = cone_join(&self.top, &other.top).ok_or_else(|| {
            Error::Domain("characters have tops in different root-lattice cosets".into())
        })?;
        let a = self.retop(&top)?;
        let b = other.retop(&top)?;
        for side in [&a, &b] {
            if let Some(available) = side.guaranteed_depth() {
                if depth > available {
                    return Err(Error::Truncation { requested: depth, available });
                }
            }
        }
        let mut candidates: Vec<(u32, &Weight)> = a
            .coeffs
            .keys()
            .chain(b.coeffs.keys())
            .filter_map(|w| depth_below(&top, w).filter(|&d| d <= depth).map(|d| (d, w)))
            .collect();
        candidates.sort();
        candidates.dedup();
        for (d, w) in candidates {
            let (left, right) = (a.coeff(w), b.coeff(w));
            if left != right {
                return Ok(Some(Mismatch { weight: w.clone(), depth: d, left, right }));
            }
        }
        Ok(None)
    }

    pub fn agrees_to_depth(&self, other: &Self, depth: u32) -> Result<bool> {
        Ok(self.first_mismatch(other, depth)?.is_none())
    }
}

#[derive(Serialize)]
struct TermRepr<'a> {
    weight: &'a Weight,
    multiplicity: String,
}

impl Serialize for FormalCharacter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.sorted_terms();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for (_, w, c) in terms {
            seq.serialize_element(&TermRepr { weight: w, multiplicity: c.to_string() })?;
        }
        seq.end()
    }
}

/// `Σ_{k ≥ 0} e^{−kα}` truncated at `depth` below 0.
fn geometric_series(root: Root, rank: usize, depth: u32) -> FormalCharacter {
    let alpha = root.weight(rank);
    let zero = Weight::zero(rank);
    let height = depth_below(&zero, &-&alpha).expect("positive root");
    let mut coeffs = HashMap::new();
    let mut w = zero.clone();
    for _ in 0..=depth / height {
        coeffs.insert(w.clone(), BigInt::one());
        w = &w - &alpha;
    }
    FormalCharacter { top: zero, precision: Precision::Truncated(depth), coeffs }
}

/// `Π_{α>0} (1 − e^{−α})^{−1}` multiplied out in the given root order.
pub fn weyl_denominator_inverse_with_order(rank: usize, depth: u32, roots: &[Root]) -> Result<FormalCharacter> {
    Guards::current().check_cone(rank, depth)?;
    let mut acc = FormalCharacter::trivial(rank).truncate(depth)?;
    for &r in roots {
        acc = acc.mul(&geometric_series(r, rank, depth), depth)?;
    }
    Ok(acc)
}

/// Inverse Weyl denominator; the coefficient at `−β` is Kostant's partition
/// function of `β`. Results are memoised per `(rank, depth)`.
pub fn weyl_denominator_inverse(rank: usize, depth: u32) -> Result<Arc<FormalCharacter>> {
    type Memo = Mutex<HashMap<(usize, u32), Arc<FormalCharacter>>>;
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(hit) = memo.lock().expect("memo poisoned").get(&(rank, depth)) {
        return Ok(Arc::clone(hit));
    }
    let value = Arc::new(weyl_denominator_inverse_with_order(rank, depth, &positive_roots(rank))?);
    memo.lock().expect("memo poisoned").insert((rank, depth), Arc::clone(&value));
    Ok(value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinorParity {
    Even,
    Odd,
}

/// Highest weight of the even (`−½ϖ_l`) or odd (`ϖ_{l−1} − 3/2·ϖ_l`) spinor module.
pub fn spinor_top(rank: usize, parity: SpinorParity) -> Weight {
    let mut d = vec![-1; rank];
    if parity == SpinorParity::Odd {
        d[rank - 1] = -3;
    }
    Weight::from_doubled(d).expect("rank is positive")
}

/// Multiplicity one on every `−½𝟙 − n` with `n ∈ ℕ₀^l` and `Σn` of the given
/// parity, down to `depth`.
pub fn spinor_character(rank: usize, parity: SpinorParity, depth: u32) -> Result<FormalCharacter> {
    if rank == 0 {
        return Err(Error::Domain("rank must be positive".into()));
    }
    Guards::current().check_cone(rank, depth)?;
    let top = spinor_top(rank, parity);
    let base = spinor_top(rank, SpinorParity::Even);
    let want_odd = parity == SpinorParity::Odd;
    // depth ≥ Σn/2, so Σn ≤ 2·depth + 1 covers everything
    let max_total = 2 * depth as i64 + 1;
    let mut coeffs = HashMap::new();
    let mut n = vec![0i64; rank];
    loop {
        let total: i64 = n.iter().sum();
        if (total % 2 == 1) == want_odd {
            let w = Weight::from_doubled(
                base.doubled().iter().zip(&n).map(|(b, k)| b - 2 * k).collect(),
            )?;
            if depth_below(&top, &w).is_some_and(|d| d <= depth) {
                coeffs.insert(w, BigInt::one());
            }
        }
        // odometer over n with Σn ≤ max_total
        let mut k = 0;
        loop {
            if k == rank {
                return Ok(FormalCharacter { top, precision: Precision::Truncated(depth), coeffs });
            }
            n[k] += 1;
            if n.iter().sum::<i64>() <= max_total {
                break;
            }
            n[k] = 0;
            k += 1;
        }
    }
}

/// Alternating sum `Σ_{w ∈ W_[λ]} det(w) e^{w(λ+ρ)−ρ}`, keeping terms of depth
/// `≤ depth` below `λ`.
pub fn kw_numerator(lam: &Weight, depth: u32) -> Result<FormalCharacter> {
    let rho = Weight::rho(lam.rank());
    let shifted = lam + &rho;
    let mut terms = Vec::new();
    for (w, det) in integral_subgroup(lam)? {
        let mu = &w.act(&shifted) - &rho;
        let d = depth_below(lam, &mu).ok_or_else(|| {
            Error::Consistency(format!("numerator term {mu:?} escapes the cone below {lam:?}"))
        })?;
        if d <= depth {
            terms.push((mu, BigInt::from(det)));
        }
    }
    FormalCharacter::from_terms(lam.clone(), Precision::Truncated(depth), terms)
}

/// Formal character of `L(λ)` to `depth`, for `λ` in the set A or dominant
/// integral, via the integral-Weyl-subgroup alternating sum over the full
/// Weyl denominator.
pub fn kw_character(lam: &Weight, depth: u32) -> Result<FormalCharacter> {
    if !(lam.is_in_a() || lam.is_dominant_integral()) {
        return Err(Error::Domain(format!(
            "{lam} is neither dominant integral nor in the set A"
        )));
    }
    let numerator = kw_numerator(lam, depth)?;
    let denominator = weyl_denominator_inverse(lam.rank(), depth)?;
    numerator.mul(&denominator, depth)
}

/// Sum of characters over a list of highest weights, all measured below a
/// common `top` and exact to `depth` there. Summands whose top lies deeper
/// than `depth` contribute nothing within range and are skipped.
pub fn sum_of_kw_characters<'a, I>(top: &Weight, depth: u32, weights: I) -> Result<FormalCharacter>
where
    I: IntoIterator<Item = &'a Weight>,
{
    let mut acc = FormalCharacter::zero(top.clone(), Precision::Truncated(depth));
    for lam in weights {
        let shift = depth_below(top, lam).ok_or_else(|| {
            Error::Consistency(format!("summand {lam} is not below {top}"))
        })?;
        if shift > depth {
            continue;
        }
        acc = acc.add(&kw_character(lam, depth - shift)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::half::Half;

    fn w(d: &[i64]) -> Weight {
        Weight::from_doubled(d.to_vec()).unwrap()
    }

    fn defining(rank: usize) -> FormalCharacter {
        let terms = (1..=rank).flat_map(|k| {
            let e = Weight::epsilon(rank, k);
            [(e.clone(), BigInt::one()), (-&e, BigInt::one())]
        });
        FormalCharacter::from_terms(Weight::epsilon(rank, 1), Precision::Complete, terms).unwrap()
    }

    #[test]
    fn add_identities() {
        let s = spinor_character(2, SpinorParity::Even, 6).unwrap();
        let zero = FormalCharacter::zero(s.top().clone(), Precision::Complete);
        assert_eq!(s.add(&zero).unwrap(), s);

        let t = FormalCharacter::trivial(3);
        let two = t.add(&t).unwrap();
        assert_eq!(two.coeff(&Weight::zero(3)), BigInt::from(2));
        assert_eq!(two.len(), 1);
    }

    #[test]
    fn add_rejects_different_cosets() {
        let even = spinor_character(2, SpinorParity::Even, 4).unwrap();
        let odd = spinor_character(2, SpinorParity::Odd, 4).unwrap();
        assert!(matches!(even.add(&odd), Err(Error::Domain(_))));

        // the two supports split the lattice −½𝟙 − ℕ₀² between them
        let even = spinor_character(2, SpinorParity::Even, 8).unwrap();
        let odd = spinor_character(2, SpinorParity::Odd, 8).unwrap();
        for a in 0..=2 {
            for b in 0..=2 {
                let mu = w(&[-1 - 2 * a, -1 - 2 * b]);
                let total = even.coeff(&mu) + odd.coeff(&mu);
                assert_eq!(total, BigInt::one(), "{mu:?}");
            }
        }
    }

    #[test]
    fn cancellation_removes_entries() {
        let a = FormalCharacter::monomial(w(&[0, 0]));
        let b = a.scale(&BigInt::from(-1));
        assert!(a.add(&b).unwrap().is_empty());
    }

    #[test]
    fn mul_examples() {
        let s = spinor_character(2, SpinorParity::Even, 6).unwrap();
        assert_eq!(s.mul(&FormalCharacter::trivial(2), 6).unwrap(), s);

        let v = defining(2);
        let vv = v.mul_exact(&v).unwrap();
        assert_eq!(vv.coeff(&w(&[4, 0])), BigInt::from(1));
        assert_eq!(vv.coeff(&w(&[0, 0])), BigInt::from(4));
        assert_eq!(vv.total_mass(), BigInt::from(16));
    }

    #[test]
    fn mul_refuses_to_overstate_depth() {
        let s = spinor_character(2, SpinorParity::Even, 4).unwrap();
        assert_eq!(s.mul(&s, 5), Err(Error::Truncation { requested: 5, available: 4 }));
        assert!(s.mul(&defining(2), 4).is_ok());
    }

    #[test]
    fn denominator_examples() {
        let d1 = weyl_denominator_inverse(1, 4).unwrap();
        assert_eq!(d1.coeff(&Weight::zero(1)), BigInt::one());
        assert_eq!(d1.coeff(&w(&[-4])), BigInt::one());

        let d2 = weyl_denominator_inverse(2, 6).unwrap();
        assert_eq!(d2.coeff(&Weight::zero(2)), BigInt::one());
        assert_eq!(d2.coeff(&w(&[-2, -2])), BigInt::from(2));
    }

    #[test]
    fn denominator_is_order_independent() {
        for l in 1..=3 {
            let mut roots = positive_roots(l);
            let forward = weyl_denominator_inverse_with_order(l, 7, &roots).unwrap();
            roots.reverse();
            let backward = weyl_denominator_inverse_with_order(l, 7, &roots).unwrap();
            assert_eq!(forward, backward);
        }
    }

    #[test]
    fn spinor_examples() {
        let even = spinor_character(3, SpinorParity::Even, 5).unwrap();
        assert_eq!(even.coeff(&w(&[-1, -1, -1])), BigInt::one());
        let even2 = spinor_character(2, SpinorParity::Even, 5).unwrap();
        assert_eq!(even2.coeff(&w(&[-3, -3])), BigInt::one());
        assert_eq!(even2.coeff(&w(&[-1, -3])), BigInt::zero());
        let odd2 = spinor_character(2, SpinorParity::Odd, 5).unwrap();
        assert_eq!(odd2.coeff(&w(&[-1, -3])), BigInt::one());
        assert_eq!(odd2.top(), &w(&[-1, -3]));
        assert_eq!(
            odd2.top().fundamental_coords(),
            vec![Half::from_int(1), Half::from_doubled(-3)]
        );
    }

    #[test]
    fn kw_rejects_weights_outside_both_classes() {
        let bad = w(&[-1, 1]);
        assert!(matches!(kw_character(&bad, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn kw_trivial_module() {
        let c = kw_character(&Weight::zero(3), 8).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeff(&Weight::zero(3)), BigInt::one());
    }

    #[test]
    fn kw_mixed_weight_is_non_negative() {
        // ϖ_1 − ½ϖ_l at rank 2
        let lam = w(&[1, -1]);
        assert!(lam.is_in_a());
        let c = kw_character(&lam, 4).unwrap();
        assert_eq!(c.coeff(&lam), BigInt::one());
        assert!(c.min_coefficient() >= BigInt::zero());
    }

    #[test]
    fn truncate_and_retop() {
        let s = spinor_character(2, SpinorParity::Even, 6).unwrap();
        let t = s.truncate(3).unwrap();
        assert!(s.agrees_to_depth(&t, 3).unwrap());
        assert_eq!(s.truncate(7), Err(Error::Truncation { requested: 7, available: 6 }));
        let higher = &Weight::simple_root(2, 1) + s.top();
        let r = s.retop(&higher).unwrap();
        assert_eq!(r.guaranteed_depth(), Some(7));
        assert!(r.agrees_to_depth(&s, 6).unwrap());
    }

    #[test]
    fn json_is_sorted_by_depth() {
        let s = spinor_character(2, SpinorParity::Even, 2).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), s.len());
        assert_eq!(arr[0]["weight"]["epsilon"], serde_json::json!(["-1/2", "-1/2"]));
        assert_eq!(arr[0]["multiplicity"], "1");
    }
}
