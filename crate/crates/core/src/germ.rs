//! Function-germs as factor lists `f = f_1^(m_1) ... f_r^(m_r)`.

use crate::arc::BranchGerm;
use crate::bivariate::BivariatePoly;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::invariants::{characteristic_data, intersection_number, CharData};
use crate::series::PuiseuxSeries;

/// One irreducible factor with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub branch: BranchGerm,
    pub mult: u32,
}

/// A germ with cached characteristic data and intersection matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermPresentation {
    factors: Vec<Factor>,
    chars: Vec<CharData>,
    intersections: Vec<Vec<u64>>,
}

impl GermPresentation {
    /// Validates distinctness and caches invariants.
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidBranch("a germ needs at least one factor".into()));
        }
        if let Some(f) = factors.iter().find(|f| f.mult == 0) {
            return Err(Error::InvalidBranch(format!(
                "factor multiplicity must be positive (branch m = {})",
                f.branch.m()
            )));
        }
        let chars = factors
            .iter()
            .map(|f| characteristic_data(&f.branch))
            .collect::<Result<Vec<_>>>()?;
        let r = factors.len();
        let mut intersections = vec![vec![0u64; r]; r];
        for i in 0..r {
            for j in i + 1..r {
                let v = intersection_number(&factors[i].branch, &factors[j].branch).map_err(|e| match e {
                    Error::NotDistinct(_) => Error::NotDistinct(format!("factors {i} and {j} define the same branch")),
                    other => other,
                })?;
                intersections[i][j] = v;
                intersections[j][i] = v;
            }
        }
        Ok(GermPresentation { factors, chars, intersections })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn char_data(&self) -> &[CharData] {
        &self.chars
    }

    /// Symmetric matrix of pairwise intersection numbers; the diagonal is zero.
    pub fn intersection_matrix(&self) -> &[Vec<u64>] {
        &self.intersections
    }

    /// Multiplicity at the origin, `sum mult_i * m_i`.
    pub fn multiplicity(&self) -> u64 {
        self.factors.iter().map(|f| f.mult as u64 * f.branch.m() as u64).sum()
    }

    /// `prod f_i^(mult_i)` from the branch equations; needs exact parameterizations.
    pub fn polynomial(&self) -> Result<BivariatePoly> {
        let mut f = BivariatePoly::constant(CycloNumber::from_int(1));
        for factor in &self.factors {
            f = f.mul(&factor.branch.defining_polynomial()?.pow(factor.mult));
        }
        Ok(f)
    }

    /// The same germ with factors listed in the order `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if !is_permutation(perm, self.len()) {
            return Err(Error::InvalidCertificate(format!("{perm:?} is not a permutation of 0..{}", self.len())));
        }
        Ok(GermPresentation {
            factors: perm.iter().map(|&i| self.factors[i].clone()).collect(),
            chars: perm.iter().map(|&i| self.chars[i].clone()).collect(),
            intersections: perm
                .iter()
                .map(|&i| perm.iter().map(|&j| self.intersections[i][j]).collect())
                .collect(),
        })
    }
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n
        && perm.iter().all(|&i| {
            let fresh = i < n && !seen[i];
            if fresh {
                seen[i] = true;
            }
            fresh
        })
}

/// Branch data as supplied by a user: `psi` is taken as exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSpec {
    pub m: u32,
    pub psi: PuiseuxSeries,
    pub mult: u32,
}

pub fn germ_from_branch_data(specs: &[BranchSpec]) -> Result<GermPresentation> {
    let factors = specs
        .iter()
        .map(|s| {
            let psi = PuiseuxSeries::exact(s.psi.terms().to_vec());
            Ok(Factor { branch: BranchGerm::new(s.m, psi)?, mult: s.mult })
        })
        .collect::<Result<Vec<_>>>()?;
    GermPresentation::new(factors)
}
