//! Deciding bi-Lipschitz contact equivalence of germs from their invariants.
//!
//! Two germs are equivalent iff some bijection of factors preserves the
//! multiplicities, the Puiseux characteristic and the pairwise intersection numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::germ::{is_permutation, GermPresentation};
use crate::invariants::CharData;

/// Canonical form of a germ: factors and matrix in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InvariantSignature {
    pub factors: Vec<(u32, CharData)>,
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
}

/// The first violated condition, in the order they are checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Witness {
    FactorCountMismatch { left: usize, right: usize },
    MultiplicityMultisetMismatch { left: Vec<u32>, right: Vec<u32> },
    /// Factor `i` of the first germ has no partner with the same multiplicity and characteristic.
    PuiseuxPairMismatch { i: usize },
    /// The intersection number of factors `i, j` of the first germ has no counterpart.
    IntersectionMatrixMismatch { i: usize, j: usize },
    NoConsistentBijection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceCertificate {
    pub verdict: Verdict,
    /// `sigma[i]` is the factor of the second germ matched with factor `i` of the first.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sigma: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl EquivalenceCertificate {
    fn equivalent(sigma: Vec<usize>) -> Self {
        EquivalenceCertificate { verdict: Verdict::Equivalent, sigma: Some(sigma), witness: None }
    }

    fn not_equivalent(w: Witness) -> Self {
        EquivalenceCertificate { verdict: Verdict::NotEquivalent, sigma: None, witness: Some(w) }
    }

    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::Equivalent
    }
}

fn class_key(g: &GermPresentation, i: usize) -> (u32, &CharData) {
    (g.factors()[i].mult, &g.char_data()[i])
}

/// Refines colors by the multiset of (neighbour color, intersection number) until stable.
fn refine(g: &GermPresentation, mut colors: Vec<usize>) -> Vec<usize> {
    let n = colors.len();
    let m = g.intersection_matrix();
    loop {
        let keys: Vec<(usize, Vec<(usize, u64)>)> = (0..n)
            .map(|i| {
                let mut nb: Vec<(usize, u64)> = (0..n).filter(|&j| j != i).map(|j| (colors[j], m[i][j])).collect();
                nb.sort_unstable();
                (colors[i], nb)
            })
            .collect();
        let mut distinct = keys.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = keys.iter().map(|k| distinct.binary_search(k).unwrap()).collect();
        let stable = distinct.len() == colors.iter().collect::<std::collections::BTreeSet<_>>().len();
        colors = next;
        if stable {
            return colors;
        }
    }
}

fn form_for_order(g: &GermPresentation, order: &[usize]) -> InvariantSignature {
    let m = g.intersection_matrix();
    InvariantSignature {
        factors: order.iter().map(|&i| (g.factors()[i].mult, g.char_data()[i].clone())).collect(),
        matrix: order.iter().map(|&i| order.iter().map(|&j| m[i][j]).collect()).collect(),
    }
}

fn search_canonical(g: &GermPresentation, colors: Vec<usize>, best: &mut Option<InvariantSignature>) {
    let colors = refine(g, colors);
    let n = colors.len();
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(i);
    }
    match cells.iter().find(|(_, members)| members.len() > 1) {
        None => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&i| colors[i]);
            let form = form_for_order(g, &order);
            if best.as_ref().map_or(true, |b| form < *b) {
                *best = Some(form);
            }
        }
        Some((&cell_color, members)) => {
            for &v in members {
                // Colors are doubled so that v sorts just before the rest of its cell.
                let mut next: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
                next[v] = 2 * cell_color;
                search_canonical(g, next, best);
            }
        }
    }
}

/// Canonical labeling by color refinement and individualization; ties are broken by the
/// lexicographically least resulting form.
pub fn invariant_signature(g: &GermPresentation) -> InvariantSignature {
    let n = g.len();
    let mut classes: Vec<(u32, &CharData)> = (0..n).map(|i| class_key(g, i)).collect();
    classes.sort();
    classes.dedup();
    let colors = (0..n).map(|i| classes.binary_search(&class_key(g, i)).unwrap()).collect();
    let mut best = None;
    search_canonical(g, colors, &mut best);
    best.expect("at least one labeling")
}

fn count<K: Ord>(items: impl Iterator<Item = K>) -> BTreeMap<K, usize> {
    let mut out = BTreeMap::new();
    for k in items {
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

type Triple<'a> = ((u32, &'a CharData), (u32, &'a CharData), u64);

fn triples(h: &GermPresentation) -> BTreeMap<Triple<'_>, usize> {
    let m = h.intersection_matrix();
    count((0..h.len()).flat_map(|i| {
        (0..h.len()).filter(move |&j| j != i).map(move |j| (class_key(h, i), class_key(h, j), m[i][j]))
    }))
}

fn backtrack(f: &GermPresentation, g: &GermPresentation, sigma: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = sigma.len();
    if i == f.len() {
        return true;
    }
    let (mf, mg) = (f.intersection_matrix(), g.intersection_matrix());
    for j in 0..g.len() {
        if used[j] || class_key(f, i) != class_key(g, j) {
            continue;
        }
        if (0..i).any(|k| mf[i][k] != mg[j][sigma[k]]) {
            continue;
        }
        sigma.push(j);
        used[j] = true;
        if backtrack(f, g, sigma, used) {
            return true;
        }
        used[j] = false;
        sigma.pop();
    }
    false
}

/// Decides equivalence; an `Equivalent` verdict carries a bijection that has passed
/// [`verify_certificate`].
pub fn decide_equivalence(f: &GermPresentation, g: &GermPresentation) -> Result<EquivalenceCertificate> {
    if f.len() != g.len() {
        return Ok(EquivalenceCertificate::not_equivalent(Witness::FactorCountMismatch {
            left: f.len(),
            right: g.len(),
        }));
    }
    let mults = |h: &GermPresentation| {
        let mut v: Vec<u32> = h.factors().iter().map(|x| x.mult).collect();
        v.sort_unstable();
        v
    };
    if mults(f) != mults(g) {
        return Ok(EquivalenceCertificate::not_equivalent(Witness::MultiplicityMultisetMismatch {
            left: mults(f),
            right: mults(g),
        }));
    }
    let (cf, cg) = (count((0..f.len()).map(|i| class_key(f, i))), count((0..g.len()).map(|i| class_key(g, i))));
    if let Some(i) = (0..f.len()).find(|&i| cf.get(&class_key(f, i)) != cg.get(&class_key(f, i))) {
        return Ok(EquivalenceCertificate::not_equivalent(Witness::PuiseuxPairMismatch { i }));
    }
    let mut sigma = Vec::with_capacity(f.len());
    if backtrack(f, g, &mut sigma, &mut vec![false; g.len()]) {
        if !verify_certificate(f, g, &sigma)? {
            return Err(Error::Inconsistent("search produced a bijection that fails verification".into()));
        }
        return Ok(EquivalenceCertificate::equivalent(sigma));
    }
    let (tf, tg) = (triples(f), triples(g));
    let mf = f.intersection_matrix();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let key = (class_key(f, i), class_key(f, j), mf[i][j]);
            if tf.get(&key) != tg.get(&key) {
                return Ok(EquivalenceCertificate::not_equivalent(Witness::IntersectionMatrixMismatch { i, j }));
            }
        }
    }
    Ok(EquivalenceCertificate::not_equivalent(Witness::NoConsistentBijection))
}

/// Checks that `sigma` matches multiplicities, characteristics and intersection numbers.
pub fn verify_certificate(f: &GermPresentation, g: &GermPresentation, sigma: &[usize]) -> Result<bool> {
    if sigma.len() != f.len() {
        return Err(Error::InvalidCertificate(format!(
            "sigma has {} entries, the first germ has {} factors",
            sigma.len(),
            f.len()
        )));
    }
    if let Some(&j) = sigma.iter().find(|&&j| j >= g.len()) {
        return Err(Error::InvalidCertificate(format!(
            "index {j} is out of range for a germ with {} factors",
            g.len()
        )));
    }
    if f.len() != g.len() {
        return Ok(false);
    }
    if !is_permutation(sigma, g.len()) {
        return Err(Error::InvalidCertificate(format!("{sigma:?} is not a permutation")));
    }
    let (mf, mg) = (f.intersection_matrix(), g.intersection_matrix());
    let ok = (0..f.len()).all(|i| {
        f.factors()[i].mult == g.factors()[sigma[i]].mult
            && f.char_data()[i] == g.char_data()[sigma[i]]
            && (0..f.len()).all(|j| i == j || mf[i][j] == mg[sigma[i]][sigma[j]])
    });
    Ok(ok)
}
