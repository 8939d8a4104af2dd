//! The Weyl group of C_l realised as signed permutations of the ε-basis.

use std::collections::{HashSet, VecDeque};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::guards::{Guards, MAX_RANK};
use crate::weights::{positive_roots, Root, Weight};

/// `w(ε_j) = signs[perm[j]] · ε_{perm[j]}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement { perm: (0..rank).collect(), signs: vec![1; rank] }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let l = perm.len();
        let mut seen = vec![false; l];
        for &p in &perm {
            if p >= l || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Domain(format!("{perm:?} is not a permutation")));
            }
        }
        if signs.len() != l || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Domain(format!("bad sign vector {signs:?}")));
        }
        Ok(WeylElement { perm, signs })
    }

    /// The reflection `s_α`.
    pub fn reflection(root: Root, rank: usize) -> Self {
        let mut w = WeylElement::identity(rank);
        match root {
            Root::Difference(i, j) => w.perm.swap(i, j),
            Root::Sum(i, j) => {
                w.perm.swap(i, j);
                w.signs[i] = -1;
                w.signs[j] = -1;
            }
            Root::Long(i) => w.signs[i] = -1,
        }
        w
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `sign(permutation) · Π signs`.
    pub fn det(&self) -> i8 {
        let mut visited = vec![false; self.rank()];
        let mut parity = 0;
        for start in 0..self.rank() {
            let mut len = 0;
            let mut k = start;
            while !visited[k] {
                visited[k] = true;
                k = self.perm[k];
                len += 1;
            }
            if len > 0 {
                parity += len - 1;
            }
        }
        let perm_sign = if parity % 2 == 0 { 1 } else { -1 };
        perm_sign * self.signs.iter().product::<i8>()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        let l = self.rank();
        let mut perm = vec![0; l];
        let mut signs = vec![1; l];
        for j in 0..l {
            let mid = other.perm[j];
            let target = self.perm[mid];
            perm[j] = target;
            signs[target] = self.signs[target] * other.signs[mid];
        }
        WeylElement { perm, signs }
    }

    pub fn inverse(&self) -> WeylElement {
        let l = self.rank();
        let mut perm = vec![0; l];
        let mut signs = vec![1; l];
        for j in 0..l {
            let k = self.perm[j];
            perm[k] = j;
            signs[j] = self.signs[k];
        }
        WeylElement { perm, signs }
    }

    /// `(w·v)_k = signs_k · v_{perm⁻¹(k)}`.
    pub fn act(&self, v: &Weight) -> Weight {
        assert_eq!(self.rank(), v.rank(), "rank mismatch");
        let mut out = vec![0; self.rank()];
        for (j, &x) in v.doubled().iter().enumerate() {
            let k = self.perm[j];
            out[k] = self.signs[k] as i64 * x;
        }
        Weight::from_doubled(out).expect("rank is positive")
    }
}

/// Order of W(C_l), `2^l · l!`.
pub fn group_order(rank: usize) -> u64 {
    (1..=rank as u64).product::<u64>() << rank
}

/// Streams every element of W(C_l) exactly once together with its determinant.
pub fn enumerate(rank: usize) -> Result<impl Iterator<Item = (WeylElement, i8)>> {
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::Resource(format!(
            "Weyl group enumeration supports ranks 1..={MAX_RANK}, got {rank}"
        )));
    }
    Ok((0..rank).permutations(rank).flat_map(move |perm| {
        (0u32..1 << rank).map(move |mask| {
            let signs = (0..rank).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            let w = WeylElement { perm: perm.clone(), signs };
            let det = w.det();
            (w, det)
        })
    }))
}

/// Reflections `s_α` with `⟨λ+ρ, α∨⟩ ∈ ℤ`.
pub fn integral_reflections(lam: &Weight) -> Vec<Root> {
    let shifted = lam + &Weight::rho(lam.rank());
    positive_roots(lam.rank())
        .into_iter()
        .filter(|r| r.coroot_pairing(&shifted).is_integer())
        .collect()
}

/// The subgroup `W_[λ]` generated by the integral reflections, with
/// determinants, in sorted order.
pub fn integral_subgroup(lam: &Weight) -> Result<Vec<(WeylElement, i8)>> {
    let l = lam.rank();
    let generators: Vec<WeylElement> = integral_reflections(lam)
        .into_iter()
        .map(|r| WeylElement::reflection(r, l))
        .collect();
    let limit = Guards::current().max_group_order;
    let id = WeylElement::identity(l);
    let mut seen: HashSet<WeylElement> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for g in &generators {
            let next = g.compose(&w);
            if seen.insert(next.clone()) {
                if seen.len() as u64 > limit {
                    return Err(Error::Resource(format!(
                        "integral Weyl subgroup at rank {l} exceeds {limit} elements (set {})",
                        crate::guards::ENV_MAX_GROUP_ORDER
                    )));
                }
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<(WeylElement, i8)> = seen
        .into_iter()
        .map(|w| {
            let d = w.det();
            (w, d)
        })
        .collect();
    out.sort();
    Ok(out)
}
