//! Finite-dimensional modules: module labels and decompositions, the Weyl
//! dimension formula, Freudenthal's multiplicity recursion, and the
//! decomposition of exterior powers of the defining representation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::charpoly::{FormalCharacter, Precision};
use crate::error::{Error, Result};
use crate::guards::{check_rank, Guards};
use crate::half::Half;
use crate::report::SuiteReport;
use crate::weights::{cone_coords, depth_below, positive_roots, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `F(λ)`, λ dominant integral.
    Finite,
    /// `L(λ)`, λ in the set A.
    Bounded,
}

/// Isomorphism class of an irreducible highest weight module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModuleLabel {
    family: Family,
    highest_weight: Weight,
}

impl ModuleLabel {
    pub fn finite(highest_weight: Weight) -> Result<Self> {
        if !highest_weight.is_dominant_integral() {
            return Err(Error::Domain(format!("{highest_weight} is not dominant integral")));
        }
        Ok(ModuleLabel { family: Family::Finite, highest_weight })
    }

    pub fn bounded(highest_weight: Weight) -> Result<Self> {
        if !highest_weight.is_in_a() {
            return Err(Error::Domain(format!("{highest_weight} is not in the set A")));
        }
        Ok(ModuleLabel { family: Family::Bounded, highest_weight })
    }

    pub fn new(family: Family, highest_weight: Weight) -> Result<Self> {
        match family {
            Family::Finite => Self::finite(highest_weight),
            Family::Bounded => Self::bounded(highest_weight),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.highest_weight
    }
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.family {
            Family::Finite => "F",
            Family::Bounded => "L",
        };
        write!(f, "{prefix}{}", self.highest_weight.shorthand())
    }
}

/// A multiset of module labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    summands: BTreeMap<ModuleLabel, u32>,
}

impl Decomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: ModuleLabel) {
        self.insert_n(label, 1);
    }

    pub fn insert_n(&mut self, label: ModuleLabel, n: u32) {
        if n > 0 {
            *self.summands.entry(label).or_insert(0) += n;
        }
    }

    pub fn merge(&mut self, other: &Decomposition) {
        for (label, &n) in &other.summands {
            self.insert_n(label.clone(), n);
        }
    }

    pub fn multiplicity(&self, label: &ModuleLabel) -> u32 {
        self.summands.get(label).copied().unwrap_or(0)
    }

    /// Number of summands counted with multiplicity.
    pub fn len(&self) -> usize {
        self.summands.values().map(|&n| n as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn distinct(&self) -> usize {
        self.summands.len()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.summands.values().all(|&n| n == 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModuleLabel, u32)> {
        self.summands.iter().map(|(l, &n)| (l, n))
    }

    pub fn labels(&self) -> impl Iterator<Item = &ModuleLabel> {
        self.summands.keys()
    }

    pub fn label_set(&self) -> BTreeSet<ModuleLabel> {
        self.summands.keys().cloned().collect()
    }
}

impl FromIterator<ModuleLabel> for Decomposition {
    fn from_iter<I: IntoIterator<Item = ModuleLabel>>(iter: I) -> Self {
        let mut d = Decomposition::new();
        for label in iter {
            d.insert(label);
        }
        d
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(l, n)| if n == 1 { l.to_string() } else { format!("{n}·{l}") })
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

#[derive(Serialize, Deserialize)]
struct SummandRepr {
    family: Family,
    fundamental_coords: Vec<Half>,
    multiplicity: u32,
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let items: Vec<SummandRepr> = self
            .iter()
            .map(|(l, n)| SummandRepr {
                family: l.family,
                fundamental_coords: l.highest_weight.fundamental_coords(),
                multiplicity: n,
            })
            .collect();
        items.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Decomposition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let items = Vec::<SummandRepr>::deserialize(deserializer)?;
        let mut d = Decomposition::new();
        for item in items {
            let rank = item.fundamental_coords.len();
            let w = Weight::from_fundamental(&item.fundamental_coords, rank).map_err(D::Error::custom)?;
            let label = ModuleLabel::new(item.family, w).map_err(D::Error::custom)?;
            if item.multiplicity == 0 {
                return Err(D::Error::custom("multiplicities must be positive"));
            }
            d.insert_n(label, item.multiplicity);
        }
        Ok(d)
    }
}

fn require_dominant(lam: &Weight) -> Result<()> {
    if !lam.is_dominant_integral() {
        return Err(Error::Domain(format!("{lam} is not dominant integral")));
    }
    Ok(())
}

/// `Π_{α>0} ⟨λ+ρ, α∨⟩ / ⟨ρ, α∨⟩`.
pub fn weyl_dimension(lam: &Weight) -> Result<BigInt> {
    require_dominant(lam)?;
    let rho = Weight::rho(lam.rank());
    let shifted = lam + &rho;
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for r in positive_roots(lam.rank()) {
        num *= r.coroot_pairing(&shifted).doubled();
        den *= r.coroot_pairing(&rho).doubled();
    }
    if !(&num % &den).is_zero() {
        return Err(Error::Consistency(format!("Weyl dimension of {lam} is not integral")));
    }
    Ok(num / den)
}

/// Whether `mu` is a weight of `F(lam)`: its dominant conjugate lies below `lam`.
fn is_weight_of(lam: &Weight, mu: &Weight) -> bool {
    cone_coords(lam, &mu.dominant_conjugate()).is_some()
}

/// Exact character of `F(λ)` by Freudenthal's recursion on dominant
/// weights, extended to the full support by Weyl-group invariance.
pub fn freudenthal_multiplicities(lam: &Weight) -> Result<FormalCharacter> {
    require_dominant(lam)?;
    let limit = Guards::current().max_dimension;
    let dim = weyl_dimension(lam)?;
    if dim > BigInt::from(limit) {
        return Err(Error::Resource(format!(
            "F({lam}) has dimension {dim}, above the guard {limit} (set {})",
            crate::guards::ENV_MAX_DIMENSION
        )));
    }
    let l = lam.rank();

    // weights form an unbroken set under simple-root lowering
    let simple: Vec<Weight> = (1..=l).map(|k| Weight::simple_root(l, k)).collect();
    let mut support: HashSet<Weight> = HashSet::from([lam.clone()]);
    let mut queue = VecDeque::from([lam.clone()]);
    while let Some(mu) = queue.pop_front() {
        for a in &simple {
            let next = &mu - a;
            if is_weight_of(lam, &next) && support.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }

    let mut dominant: Vec<(u32, Weight)> = support
        .iter()
        .filter(|mu| **mu == mu.dominant_conjugate())
        .map(|mu| (depth_below(lam, mu).expect("weights lie below λ"), mu.clone()))
        .collect();
    dominant.sort();

    let rho = Weight::rho(l);
    let top_norm = (lam + &rho).dot_doubled(&(lam + &rho));
    let roots: Vec<Weight> = positive_roots(l).iter().map(|r| r.weight(l)).collect();
    let mut mult: HashMap<Weight, BigInt> = HashMap::new();
    for (_, mu) in dominant {
        if mu == *lam {
            mult.insert(mu, BigInt::one());
            continue;
        }
        let mut rhs = BigInt::zero();
        for alpha in &roots {
            let mut shifted = &mu + alpha;
            while is_weight_of(lam, &shifted) {
                let m = mult.get(&shifted.dominant_conjugate()).ok_or_else(|| {
                    Error::Consistency(format!("multiplicity of {shifted:?} requested too early"))
                })?;
                rhs += m * BigInt::from(2 * shifted.dot_doubled(alpha));
                shifted = &shifted + alpha;
            }
        }
        let denom = top_norm - (&mu + &rho).dot_doubled(&(&mu + &rho));
        if denom <= 0 || !(&rhs % denom).is_zero() {
            return Err(Error::Consistency(format!(
                "Freudenthal recursion at {mu:?} produced {rhs}/{denom}"
            )));
        }
        mult.insert(mu, rhs / denom);
    }

    let terms = support.into_iter().map(|mu| {
        let m = mult[&mu.dominant_conjugate()].clone();
        (mu, m)
    });
    FormalCharacter::from_terms(lam.clone(), Precision::Complete, terms)
}

/// The i-th elementary symmetric character of the `2l` weights `±ε_k`.
pub fn wedge_character(rank: usize, i: usize) -> Result<FormalCharacter> {
    check_rank(rank)?;
    if i > 2 * rank {
        return Err(Error::Domain(format!("exterior degree {i} exceeds {}", 2 * rank)));
    }
    let letters: Vec<Weight> = (1..=rank)
        .flat_map(|k| {
            let e = Weight::epsilon(rank, k);
            [e.clone(), -&e]
        })
        .collect();
    let mut layers: Vec<HashMap<Weight, BigInt>> = vec![HashMap::new(); i + 1];
    layers[0].insert(Weight::zero(rank), BigInt::one());
    for v in &letters {
        for s in (0..i).rev() {
            let lifted: Vec<(Weight, BigInt)> =
                layers[s].iter().map(|(w, c)| (w + v, c.clone())).collect();
            for (w, c) in lifted {
                *layers[s + 1].entry(w).or_default() += c;
            }
        }
    }
    let top = Weight::fundamental(rank, i.min(2 * rank - i));
    FormalCharacter::from_terms(top, Precision::Complete, layers.swap_remove(i))
}

/// `⋀^i 𝕍 ≅ ⊕_{p=0}^{⌊i/2⌋} F(ϖ_{i−2p})` for `i ≤ l`, extended to `i > l`
/// through `⋀^i 𝕍 ≅ ⋀^{2l−i} 𝕍`.
pub fn wedge_decomposition(rank: usize, i: usize) -> Result<Decomposition> {
    check_rank(rank)?;
    if i > 2 * rank {
        return Err(Error::Domain(format!("exterior degree {i} exceeds {}", 2 * rank)));
    }
    let k = i.min(2 * rank - i);
    (0..=k / 2)
        .map(|p| ModuleLabel::finite(Weight::fundamental(rank, k - 2 * p)))
        .collect()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * (n - j) / (j + 1))
}

/// Checks every exterior power: dimensions sum to `C(2l, i)` and the
/// Freudenthal characters of the summands add up to the exterior character.
pub fn verify_wedge(rank: usize) -> Result<SuiteReport> {
    check_rank(rank)?;
    let mut report = SuiteReport::new("wedge-decomposition");
    for i in 0..=2 * rank {
        let case = format!("l={rank}, i={i}");
        let decomposition = wedge_decomposition(rank, i)?;
        let mut dim = BigInt::zero();
        let mut summed = FormalCharacter::zero(Weight::fundamental(rank, i.min(2 * rank - i)), Precision::Complete);
        for (label, n) in decomposition.iter() {
            dim += weyl_dimension(label.highest_weight())? * n;
            let ch = freudenthal_multiplicities(label.highest_weight())?;
            summed = summed.add(&ch.scale(&BigInt::from(n)))?;
        }
        let expected_dim = binomial(2 * rank as u64, i as u64);
        if dim != expected_dim {
            report.record(case, Err(format!("dimension sum {dim} ≠ C({}, {i}) = {expected_dim}", 2 * rank)));
            continue;
        }
        let wedge = wedge_character(rank, i)?;
        let outcome = if summed == wedge {
            Ok(())
        } else {
            let mut keys: Vec<&Weight> = wedge.sorted_terms().into_iter().map(|t| t.1).collect();
            keys.extend(summed.sorted_terms().into_iter().map(|t| t.1));
            let bad = keys.into_iter().find(|w| wedge.coeff(w) != summed.coeff(w));
            Err(match bad {
                Some(w) => format!("character mismatch at {w:?}: exterior {} vs summands {}", wedge.coeff(w), summed.coeff(w)),
                None => "characters differ in top or precision".to_string(),
            })
        };
        report.record(case, outcome);
    }
    Ok(report)
}
