//! Tensor products with the symplectic spinor module and the defining
//! representation, the summands `E_{i,j}` of spinor-valued exterior forms,
//! and their character-level verification.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::charpoly::{
    kw_character, spinor_character, sum_of_kw_characters, FormalCharacter, Precision, SpinorParity,
};
use crate::error::{Error, Result};
use crate::findim::{freudenthal_multiplicities, wedge_character, wedge_decomposition, Decomposition, ModuleLabel};
use crate::guards::check_rank;
use crate::half::Half;
use crate::report::SuiteReport;
use crate::weights::Weight;

/// A position `(i, j)` in the triangular index set: column `i` is the form
/// degree, `j` the row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct XiIndex {
    pub i: usize,
    pub j: usize,
}

impl XiIndex {
    pub fn new(rank: usize, i: usize, j: usize) -> Result<Self> {
        let idx = XiIndex { i, j };
        if !idx.belongs_to(rank) {
            return Err(Error::Domain(format!("({i}, {j}) is outside the index set for rank {rank}")));
        }
        Ok(idx)
    }

    pub fn belongs_to(&self, rank: usize) -> bool {
        self.i <= 2 * rank && self.j <= column_height(rank, self.i)
    }

    /// The mirror position `(2l − i, j)`.
    pub fn mirror(&self, rank: usize) -> XiIndex {
        XiIndex { i: 2 * rank - self.i, j: self.j }
    }
}

impl fmt::Display for XiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E_{},{}", self.i, self.j)
    }
}

/// Largest row index in column `i`.
pub fn column_height(rank: usize, i: usize) -> usize {
    i.min(2 * rank - i.min(2 * rank))
}

/// All indices, column by column.
pub fn xi(rank: usize) -> Vec<XiIndex> {
    (0..=2 * rank)
        .flat_map(|i| (0..=column_height(rank, i)).map(move |j| XiIndex { i, j }))
        .collect()
}

fn require_dominant(nu: &Weight) -> Result<()> {
    if !nu.is_dominant_integral() {
        return Err(Error::Domain(format!("{nu} is not dominant integral")));
    }
    Ok(())
}

/// `{ν − Σ d_k ε_k}` over `d ∈ ℕ₀^l` with `Σd` even, `d_k ≤ ν_k` for `k < l`
/// and `d_l ≤ 2ν_l + 1`, where `ν_k` are fundamental coordinates.
pub fn t_nu(nu: &Weight) -> Result<BTreeSet<Weight>> {
    require_dominant(nu)?;
    let l = nu.rank();
    let bounds: Vec<i64> = nu
        .fundamental_coords()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let c = c.as_integer().expect("dominant integral");
            if k + 1 == l { 2 * c + 1 } else { c }
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut d = vec![0i64; l];
    loop {
        if d.iter().sum::<i64>() % 2 == 0 {
            let shift: Vec<i64> = d.iter().map(|x| 2 * x).collect();
            out.insert(nu - &Weight::from_doubled(shift)?);
        }
        let mut k = 0;
        loop {
            if k == l {
                return Ok(out);
            }
            if d[k] < bounds[k] {
                d[k] += 1;
                break;
            }
            d[k] = 0;
            k += 1;
        }
    }
}

fn half_last_fundamental(rank: usize) -> Weight {
    let mut f = vec![Half::ZERO; rank];
    f[rank - 1] = Half::from_doubled(1);
    Weight::from_fundamental(&f, rank).expect("rank matches")
}

/// `F(ν) ⊗ 𝕊₊ = ⊕_{κ ∈ T_ν} L(κ − ½ϖ_l)`.
pub fn tensor_with_spinor(nu: &Weight) -> Result<Decomposition> {
    let shift = half_last_fundamental(nu.rank());
    let mut out = Decomposition::new();
    for kappa in t_nu(nu)? {
        let lam = &kappa - &shift;
        let label = ModuleLabel::bounded(lam.clone()).map_err(|_| {
            Error::Consistency(format!("summand {lam} of F({nu})⊗𝕊 lies outside the set A"))
        })?;
        out.insert(label);
    }
    Ok(out)
}

/// Weights of the defining representation, `{±ε_k}`.
pub fn saturated_pi1(rank: usize) -> BTreeSet<Weight> {
    (1..=rank)
        .flat_map(|k| {
            let e = Weight::epsilon(rank, k);
            [e.clone(), -&e]
        })
        .collect()
}

/// `L(λ) ⊗ 𝕍 = ⊕ L(λ ± ε_k)` over the shifts that stay in the set A.
pub fn tensor_with_defining(lam: &Weight) -> Result<Decomposition> {
    if !lam.is_in_a() {
        return Err(Error::Domain(format!("{lam} is not in the set A")));
    }
    Ok(saturated_pi1(lam.rank())
        .iter()
        .map(|v| lam + v)
        .filter(Weight::is_in_a)
        .map(|mu| ModuleLabel::bounded(mu).expect("filtered"))
        .collect())
}

/// `⋀^i 𝕍* ⊗ 𝕊`, computed by splitting the exterior power into finite
/// pieces and tensoring each with the spinor module.
pub fn forms_spinor_decomposition(rank: usize, i: usize) -> Result<Decomposition> {
    let mut out = Decomposition::new();
    for (label, n) in wedge_decomposition(rank, i)?.iter() {
        let piece = tensor_with_spinor(label.highest_weight())?;
        for _ in 0..n {
            out.merge(&piece);
        }
    }
    if !out.is_multiplicity_free() {
        return Err(Error::Consistency(format!(
            "⋀^{i}𝕍*⊗𝕊 at rank {rank} has a repeated summand: {out}"
        )));
    }
    Ok(out)
}

/// Label of `E_{i,j}`: a 1 in fundamental position `j` (if `j > 0`), and
/// when `i` and `j` have different parity a further 1 in position `l−1`
/// with last coordinate `−3/2`; otherwise the last coordinate is `−½`.
/// Entries add, which yields `(0…02 −3/2)` and `(0…0 ½)` in column `l`.
pub fn e_label(rank: usize, idx: XiIndex) -> Result<ModuleLabel> {
    if rank < 2 {
        return Err(Error::Domain("the index set needs rank at least 2".into()));
    }
    if !idx.belongs_to(rank) {
        return Err(Error::Domain(format!("{idx} is outside the index set for rank {rank}")));
    }
    let mut f = vec![Half::ZERO; rank];
    if idx.j > 0 {
        f[idx.j - 1] = f[idx.j - 1] + Half::from_int(1);
    }
    if idx.i % 2 == idx.j % 2 {
        f[rank - 1] = f[rank - 1] + Half::from_doubled(-1);
    } else {
        f[rank - 2] = f[rank - 2] + Half::from_int(1);
        f[rank - 1] = f[rank - 1] + Half::from_doubled(-3);
    }
    let w = Weight::from_fundamental(&f, rank)?;
    ModuleLabel::bounded(w)
        .map_err(|e| Error::Consistency(format!("label of {idx} at rank {rank}: {e}")))
}

/// The index set with its labels, in column order.
pub fn e_table(rank: usize) -> Result<Vec<(XiIndex, ModuleLabel)>> {
    xi(rank).into_iter().map(|idx| Ok((idx, e_label(rank, idx)?))).collect()
}

fn describe_mismatch(left: &FormalCharacter, right: &FormalCharacter, depth: u32) -> Result<std::result::Result<(), String>> {
    Ok(match left.first_mismatch(right, depth)? {
        None => Ok(()),
        Some(m) => Err(format!(
            "weight {:?} at depth {}: product {} vs summands {}",
            m.weight, m.depth, m.left, m.right
        )),
    })
}

/// Checks the labelled table against the computed decomposition, and the
/// character identity `ch ⋀^i 𝕍 · ch 𝕊₊ = Σ ch L(E_{i,j})` to `depth`.
pub fn verify_forms(rank: usize, depth: u32) -> Result<SuiteReport> {
    check_rank(rank)?;
    let mut report = SuiteReport::new("forms-spinor-decomposition");
    let spinor = spinor_character(rank, SpinorParity::Even, depth)?;
    for i in 0..=2 * rank {
        let computed = forms_spinor_decomposition(rank, i)?;
        let expected: BTreeSet<ModuleLabel> = (0..=column_height(rank, i))
            .map(|j| e_label(rank, XiIndex { i, j }))
            .collect::<Result<_>>()?;
        let labels_ok = if computed.label_set() == expected && computed.len() == expected.len() {
            Ok(())
        } else {
            let missing: Vec<String> = expected.difference(&computed.label_set()).map(|l| l.to_string()).collect();
            let extra: Vec<String> = computed.label_set().difference(&expected).map(|l| l.to_string()).collect();
            Err(format!("labels differ: missing [{}], unexpected [{}]", missing.join(", "), extra.join(", ")))
        };
        report.record(format!("l={rank}, i={i}, labels"), labels_ok);

        let product = wedge_character(rank, i)?.mul(&spinor, depth)?;
        let tops: Vec<Weight> = computed.labels().map(|l| l.highest_weight().clone()).collect();
        let summed = sum_of_kw_characters(product.top(), depth, &tops)?;
        report.record(format!("l={rank}, i={i}, character"), describe_mismatch(&product, &summed, depth)?);
    }
    Ok(report)
}

/// Every dominant integral weight whose fundamental coordinates sum to at
/// most `max_sum`.
pub fn dominant_weights_up_to(rank: usize, max_sum: u32) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut f = vec![0i64; rank];
    loop {
        let coords: Vec<Half> = f.iter().map(|&x| Half::from_int(x)).collect();
        out.push(Weight::from_fundamental(&coords, rank).expect("rank matches"));
        let mut k = 0;
        loop {
            if k == rank {
                return out;
            }
            f[k] += 1;
            if f.iter().sum::<i64>() <= max_sum as i64 {
                break;
            }
            f[k] = 0;
            k += 1;
        }
    }
}

/// `ch F(ν) · ch 𝕊₊ = Σ_{κ ∈ T_ν} ch L(κ − ½ϖ_l)` to `depth` for every
/// dominant `ν` with coordinate sum at most `max_sum`.
pub fn verify_tensor_spinor(rank: usize, depth: u32, max_sum: u32) -> Result<SuiteReport> {
    check_rank(rank)?;
    let mut report = SuiteReport::new("tensor-with-spinor");
    let spinor = spinor_character(rank, SpinorParity::Even, depth)?;
    for nu in dominant_weights_up_to(rank, max_sum) {
        let case = format!("l={rank}, ν={nu}");
        let product = freudenthal_multiplicities(&nu)?.mul(&spinor, depth)?;
        let decomposition = tensor_with_spinor(&nu)?;
        let tops: Vec<Weight> = decomposition.labels().map(|l| l.highest_weight().clone()).collect();
        let summed = sum_of_kw_characters(product.top(), depth, &tops)?;
        report.record(case, describe_mismatch(&product, &summed, depth)?);
    }
    Ok(report)
}

fn defining_character(rank: usize) -> FormalCharacter {
    let terms = saturated_pi1(rank).into_iter().map(|w| (w, BigInt::from(1)));
    FormalCharacter::from_terms(Weight::epsilon(rank, 1), Precision::Complete, terms)
        .expect("defining weights lie below ε₁")
}

/// `ch L(λ) · ch 𝕍 = Σ_{μ ∈ A_λ} ch L(μ)` to `depth` for every distinct
/// label of the table.
pub fn verify_tensor_defining(rank: usize, depth: u32) -> Result<SuiteReport> {
    check_rank(rank)?;
    let mut report = SuiteReport::new("tensor-with-defining");
    let v = defining_character(rank);
    let labels: BTreeSet<ModuleLabel> = e_table(rank)?.into_iter().map(|(_, l)| l).collect();
    for label in labels {
        let lam = label.highest_weight();
        let product = kw_character(lam, depth)?.mul(&v, depth)?;
        let decomposition = tensor_with_defining(lam)?;
        let tops: Vec<Weight> = decomposition.labels().map(|l| l.highest_weight().clone()).collect();
        let summed = sum_of_kw_characters(product.top(), depth, &tops)?;
        report.record(format!("l={rank}, λ={lam}"), describe_mismatch(&product, &summed, depth)?);
    }
    Ok(report)
}

/// Plain-text triangle: row `j` holds the labels `E_{i,j}` for
/// `i = j..2l−j`, indented so each label sits under its column.
pub fn render_table(rank: usize) -> Result<String> {
    let table = e_table(rank)?;
    let width = table.iter().map(|(_, l)| l.highest_weight().shorthand().chars().count()).max().unwrap_or(0) + 2;
    let mut out = String::new();
    for j in 0..=rank {
        let mut line = String::new();
        for i in 0..=2 * rank {
            let cell = table
                .iter()
                .find(|(idx, _)| idx.i == i && idx.j == j)
                .map(|(_, l)| l.highest_weight().shorthand())
                .unwrap_or_default();
            line.push_str(&format!("{cell:<width$}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(coords: &[i64]) -> Weight {
        let f: Vec<Half> = coords.iter().map(|&d| Half::from_doubled(d)).collect();
        Weight::from_fundamental(&f, f.len()).unwrap()
    }

    fn bounded(doubled_fundamental: &[i64]) -> ModuleLabel {
        ModuleLabel::bounded(fw(doubled_fundamental)).unwrap()
    }

    #[test]
    fn xi_column_sizes() {
        let sizes = |l: usize| -> Vec<usize> {
            (0..=2 * l).map(|i| xi(l).iter().filter(|x| x.i == i).count()).collect()
        };
        assert_eq!(sizes(3), vec![1, 2, 3, 4, 3, 2, 1]);
        assert_eq!(xi(3).len(), 16);
        assert_eq!(sizes(2), vec![1, 2, 3, 2, 1]);
        for l in 2..=6 {
            assert_eq!(xi(l).len(), (l + 1) * (l + 1));
            assert!(XiIndex::new(l, l, l).is_ok());
            assert!(XiIndex::new(l, l, l + 1).is_err());
            assert!(XiIndex::new(l, 2 * l + 1, 0).is_err());
        }
    }

    #[test]
    fn t_nu_examples() {
        for l in 2..=5 {
            assert_eq!(t_nu(&Weight::zero(l)).unwrap(), BTreeSet::from([Weight::zero(l)]));
            let e1 = Weight::epsilon(l, 1);
            let el = Weight::epsilon(l, l);
            assert_eq!(t_nu(&Weight::fundamental(l, 1)).unwrap(), BTreeSet::from([e1, -&el]));
            let top = Weight::fundamental(l, l);
            let lowered = &top - &(&el + &el);
            assert_eq!(t_nu(&top).unwrap(), BTreeSet::from([top.clone(), lowered]));
        }
        assert!(t_nu(&fw(&[-2, 0])).is_err());
    }

    #[test]
    fn tensor_with_spinor_examples() {
        let l = 3;
        let d = tensor_with_spinor(&Weight::fundamental(l, 1)).unwrap();
        assert_eq!(d.label_set(), BTreeSet::from([bounded(&[2, 0, -1]), bounded(&[0, 2, -3])]));
        let trivial = tensor_with_spinor(&Weight::zero(l)).unwrap();
        assert_eq!(trivial.label_set(), BTreeSet::from([bounded(&[0, 0, -1])]));
        let two = tensor_with_spinor(&Weight::fundamental(l, 2)).unwrap();
        assert_eq!(two.label_set(), BTreeSet::from([bounded(&[0, 2, -1]), bounded(&[2, 2, -3])]));
    }

    #[test]
    fn saturated_pi1_examples() {
        assert_eq!(saturated_pi1(1).len(), 2);
        assert_eq!(saturated_pi1(2).len(), 4);
        assert_eq!(saturated_pi1(5).len(), 10);
        assert!(saturated_pi1(2).contains(&-&Weight::epsilon(2, 2)));
    }

    #[test]
    fn tensor_with_defining_examples() {
        let l = 4;
        let s = tensor_with_defining(&fw(&[0, 0, 0, -1])).unwrap();
        assert_eq!(s.label_set(), BTreeSet::from([bounded(&[2, 0, 0, -1]), bounded(&[0, 0, 2, -3])]));

        let top = tensor_with_defining(&fw(&[0, 0, 0, 1])).unwrap();
        assert_eq!(top.label_set(), BTreeSet::from([bounded(&[2, 0, 0, 1]), bounded(&[0, 0, 2, -1])]));

        let exceptional = tensor_with_defining(&fw(&[0, 0, 4, -3])).unwrap();
        assert_eq!(
            exceptional.label_set(),
            BTreeSet::from([
                bounded(&[2, 0, 4, -3]),
                bounded(&[0, 2, 2, -3]),
                bounded(&[0, 0, 6, -5]),
                bounded(&[0, 0, 2, -1]),
            ])
        );
        assert!(tensor_with_defining(&Weight::zero(l)).is_err());
    }

    #[test]
    fn e_label_examples() {
        assert_eq!(e_label(3, XiIndex { i: 2, j: 1 }).unwrap(), bounded(&[2, 2, -3]));
        assert_eq!(e_label(3, XiIndex { i: 3, j: 3 }).unwrap(), bounded(&[0, 0, 1]));
        assert_eq!(e_label(3, XiIndex { i: 3, j: 2 }).unwrap(), bounded(&[0, 4, -3]));
        assert_eq!(e_label(3, XiIndex { i: 0, j: 0 }).unwrap(), bounded(&[0, 0, -1]));
        assert!(e_label(3, XiIndex { i: 3, j: 4 }).is_err());
    }

    #[test]
    fn forms_columns_for_rank_three() {
        let col3 = forms_spinor_decomposition(3, 3).unwrap();
        assert_eq!(
            col3.label_set(),
            BTreeSet::from([bounded(&[0, 2, -3]), bounded(&[2, 0, -1]), bounded(&[0, 4, -3]), bounded(&[0, 0, 1])])
        );
        assert_eq!(forms_spinor_decomposition(3, 0).unwrap().label_set(), BTreeSet::from([bounded(&[0, 0, -1])]));
        assert_eq!(forms_spinor_decomposition(3, 6).unwrap(), forms_spinor_decomposition(3, 0).unwrap());
    }

    #[test]
    fn parity_rule_matches_computation() {
        for l in 2..=5 {
            for i in 0..=2 * l {
                let computed = forms_spinor_decomposition(l, i).unwrap();
                assert_eq!(computed.len(), column_height(l, i) + 1);
                let rule: BTreeSet<ModuleLabel> =
                    (0..=column_height(l, i)).map(|j| e_label(l, XiIndex { i, j }).unwrap()).collect();
                assert_eq!(computed.label_set(), rule, "l={l}, i={i}");
                assert_eq!(computed, forms_spinor_decomposition(l, 2 * l - i).unwrap());
            }
        }
    }

    #[test]
    fn forms_characters_small() {
        let r = verify_forms(2, 6).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn tensor_identities_small() {
        let r = verify_tensor_spinor(2, 5, 2).unwrap();
        assert!(r.passed(), "{r}");
        let r = verify_tensor_defining(2, 5).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn table_rendering_has_triangle_shape() {
        let text = render_table(3).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0].matches('(').count(), 7);
        assert_eq!(lines[3].matches('(').count(), 1);
        assert!(lines[3].trim_start().starts_with("(0 0 1/2)"));
    }
}
