//! Newton–Puiseux expansion of polynomial germs over the cyclotomic tower.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arc::BranchGerm;
use crate::bivariate::BivariatePoly;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::germ::{Factor, GermPresentation};
use crate::radical::{nth_root, rational_roots};
use crate::ring::{int, Rational};
use crate::series::{PuiseuxSeries, Valuation};
use crate::squarefree::squarefree_decomposition;
use crate::unipoly::UniPoly;

pub const DEFAULT_CONDUCTOR_CAP: u32 = 120;
/// Environment variable read by front ends for the default conductor cap.
pub const CONDUCTOR_CAP_ENV: &str = "GERM_CONDUCTOR_CAP";

const MAX_CERTIFY_ROUNDS: usize = 12;

type CycloPoly = UniPoly<CycloNumber>;

/// One edge of the Newton polygon, from `start` (upper-left) to `end`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// `y ~ c x^slope` along this edge.
    pub slope: Rational,
    pub start: (u32, u32),
    pub end: (u32, u32),
    /// `sum a_ij z^j` over the support points on the edge.
    pub face: CycloPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolygon {
    pub edges: Vec<Edge>,
    /// Order of `f(0, y)`; `None` when `x` divides `f` (a y-axis component).
    pub y_order: Option<u32>,
    /// Largest power of `y` dividing `f`.
    pub y_factor: u32,
}

/// Lower-left hull of the support, from the vertex on the `y`-axis down to the lowest row.
pub fn newton_polygon(f: &BivariatePoly) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let y_factor = f.terms().keys().map(|&(_, j)| j).min().unwrap();
    let y_order = f.terms().keys().filter(|&&(i, _)| i == 0).map(|&(_, j)| j).min();
    let mut edges = Vec::new();
    let Some(h) = y_order else {
        return Ok(NewtonPolygon { edges, y_order, y_factor });
    };
    // Leftmost point of each row below the top vertex.
    let mut rows: Vec<Option<u32>> = vec![None; h as usize];
    for &(i, j) in f.terms().keys() {
        if j < h {
            let slot = &mut rows[j as usize];
            *slot = Some(slot.map_or(i, |old| old.min(i)));
        }
    }
    let mut cur = (0u32, h);
    while cur.1 > y_factor {
        let mut best: Option<(Rational, (u32, u32))> = None;
        for j in (y_factor..cur.1).rev() {
            if let Some(i) = rows[j as usize] {
                let s = Rational::new((i as i64 - cur.0 as i64).into(), ((cur.1 - j) as i64).into());
                if best.as_ref().map_or(true, |(bs, _)| s <= *bs) {
                    best = Some((s, (i, j)));
                }
            }
        }
        let (slope, end) = best.expect("row y_factor is occupied");
        let mut face = vec![CycloNumber::from_int(0); cur.1 as usize + 1];
        for (&(i, j), c) in f.terms() {
            if j >= end.1 && j <= cur.1 {
                let on_edge = Rational::from_integer(i.into()) - Rational::from_integer(cur.0.into())
                    == &slope * Rational::from_integer((cur.1 - j).into());
                if on_edge {
                    face[j as usize] = c.clone();
                }
            }
        }
        edges.push(Edge { slope, start: cur, end, face: UniPoly::new(face) });
        cur = end;
    }
    Ok(NewtonPolygon { edges, y_order, y_factor })
}

/// Options for [`expand`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandOptions {
    /// Minimum truncation of each branch, in units of its own parameter `t` (`x = t^m`).
    pub target_trunc: Rational,
    pub conductor_cap: u32,
    /// Forces the shear `x -> x + a y` (`0` for none) instead of choosing one.
    pub shear: Option<Rational>,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions { target_trunc: Rational::zero(), conductor_cap: DEFAULT_CONDUCTOR_CAP, shear: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedBranch {
    pub branch: BranchGerm,
    pub mult: u32,
    /// Every exponent of `psi` up to this bound is correct.
    pub certified_trunc: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionReport {
    pub branches: Vec<ExpandedBranch>,
    /// `(a, b)` when the substitution `x -> x + a y, y -> y + b x` was applied first.
    pub applied_shear: Option<(Rational, Rational)>,
    /// The polynomial whose branches are reported (after the shear, if any).
    pub polynomial: BivariatePoly,
    pub germ: GermPresentation,
}

/// Rational candidates `1, -1, 2, 1/2, -2, -1/2, 3, 1/3, ...`.
fn shear_candidates() -> impl Iterator<Item = Rational> {
    (1i64..).flat_map(|n| {
        let mut v = vec![int(n), int(-n)];
        if n > 1 {
            v = vec![int(n), Rational::new(1.into(), n.into()), int(-n), Rational::new((-1).into(), n.into())];
        }
        v
    })
}

/// Chooses `a` so that `x -> x + a y` makes the tangent cone avoid the y-axis.
/// `init(f)(a, 1) != 0`: after `x -> x + a y` the tangent cone avoids the y-axis.
fn shear_admissible(init: &BivariatePoly, a: &Rational) -> bool {
    !init.eval(&CycloNumber::rational(a.clone()), &CycloNumber::from_int(1)).is_zero()
}

fn choose_shear(f: &BivariatePoly, forced: Option<&Rational>) -> Result<Option<Rational>> {
    let init = f.initial_form();
    match forced {
        Some(a) if shear_admissible(&init, a) => Ok((!a.is_zero()).then(|| a.clone())),
        Some(a) => Err(Error::InvalidBranch(format!(
            "the tangent cone contains the y-axis after x -> x + {} y",
            crate::ring::format_rational(a)
        ))),
        None if shear_admissible(&init, &Rational::zero()) => Ok(None),
        None => Ok(shear_candidates().find(|a| shear_admissible(&init, a))),
    }
}

/// A branch whose expansion is settled up to a regular tail.
#[derive(Debug, Clone)]
struct Pending {
    m: u32,
    /// Terms `(exponent in t, coeff)` fixed before the tail.
    prefix: Vec<(u64, CycloNumber)>,
    /// `y = prefix + t^entry Y` where `tail(t, Y) = 0` has a unique root `Y(0) = 0`.
    entry: u64,
    tail: Option<BivariatePoly>,
    mult: u32,
}

/// `F(T^b, T^a (c + Y)) / T^shift`.
fn substitute_step(f: &BivariatePoly, a: u32, b: u32, c: &CycloNumber, shift: u32) -> BivariatePoly {
    let max_j = f.degree_y().unwrap_or(0) as usize;
    // (c + Y)^j expanded
    let mut binom: Vec<Vec<CycloNumber>> = vec![vec![CycloNumber::from_int(1)]];
    for j in 1..=max_j {
        let prev = &binom[j - 1];
        let mut next = vec![CycloNumber::from_int(0); j + 1];
        for (k, p) in prev.iter().enumerate() {
            next[k] = next[k].add(&p.mul(c));
            next[k + 1] = next[k + 1].add(p);
        }
        binom.push(next);
    }
    let mut out = BivariatePoly::zero();
    for (&(i, j), coef) in f.terms() {
        let power = b * i + a * j;
        debug_assert!(power >= shift);
        for (k, bc) in binom[j as usize].iter().enumerate() {
            if !bc.is_zero() {
                out.add_term(power - shift, k as u32, coef.mul(bc));
            }
        }
    }
    out
}

fn unsupported(face: &CycloPoly, cap: u32) -> Error {
    Error::UnsupportedExtension { face: face.to_string(), cap }
}

/// All roots of a squarefree polynomial inside the tower, or `None`.
fn squarefree_roots(s: &CycloPoly, cap: u32) -> Option<Vec<CycloNumber>> {
    let deg = s.degree()?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let c = s.coeffs();
    if deg == 1 {
        return c[0].neg().div(&c[1]).ok().map(|r| vec![r]);
    }
    // Polynomials in z^g reduce to roots of a smaller polynomial.
    let g = c
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .fold(0usize, |g, (k, _)| g.gcd(&k));
    if g > 1 {
        let inner = UniPoly::new(c.iter().step_by(g).cloned().collect());
        let mut out = Vec::new();
        for u in squarefree_roots(&inner, cap)? {
            let r0 = nth_root(&u, g as u32, cap)?;
            for k in 0..g as i64 {
                let r = r0.mul(&CycloNumber::root_of_unity(g as u32, k));
                if r.conductor() > cap {
                    return None;
                }
                out.push(r);
            }
        }
        return Some(out);
    }
    if deg == 2 {
        let (p, q) = (c[1].div(&c[2]).ok()?, c[0].div(&c[2]).ok()?);
        let disc = p.mul(&p).sub(&q.scale(&int(4)));
        let sq = nth_root(&disc, 2, cap)?;
        let half = Rational::new(1.into(), 2.into());
        return Some(vec![sq.sub(&p).scale(&half), sq.neg().sub(&p).scale(&half)]);
    }
    let rational: Option<Vec<Rational>> = c.iter().map(|a| a.as_rational()).collect();
    let rational = rational?;
    let roots = rational_roots(&rational);
    if roots.is_empty() {
        return None;
    }
    let mut rest = s.clone();
    let mut out = Vec::new();
    for r in roots {
        let lin = UniPoly::new(vec![CycloNumber::rational(-r.clone()), CycloNumber::from_int(1)]);
        rest = rest.exact_div(&lin).ok()?;
        out.push(CycloNumber::rational(r));
    }
    out.extend(squarefree_roots(&rest, cap)?);
    Some(out)
}

/// Distinct nonzero roots of `phi` with multiplicities.
fn face_roots(phi: &CycloPoly, cap: u32) -> Result<Vec<(CycloNumber, u32)>> {
    let mut out = Vec::new();
    for (s, r) in phi.squarefree()? {
        let roots = squarefree_roots(&s, cap).ok_or_else(|| unsupported(phi, cap))?;
        if roots.len() != s.degree().unwrap_or(0) {
            return Err(Error::Inconsistent(format!("root count mismatch for {s}")));
        }
        for w in roots {
            if !s.eval(&w).is_zero() {
                return Err(Error::Inconsistent(format!("{w} is not a root of {s}")));
            }
            if w.conductor() > cap {
                return Err(unsupported(phi, cap));
            }
            out.push((w, r));
        }
    }
    Ok(out)
}

struct Splitter {
    cap: u32,
    mult: u32,
    out: Vec<Pending>,
}

impl Splitter {
    fn split(&mut self, f: &BivariatePoly, m: u32, prefix: &[(u64, CycloNumber)], e: u64) -> Result<()> {
        let poly = newton_polygon(f)?;
        let h = poly.y_order.ok_or_else(|| Error::Inconsistent("lost y-regularity during expansion".into()))?;
        if poly.y_factor > 1 {
            return Err(Error::Inconsistent("repeated root in a squarefree factor".into()));
        }
        if poly.y_factor == 1 {
            self.out.push(Pending { m, prefix: prefix.to_vec(), entry: e, tail: None, mult: self.mult });
        }
        if h == 1 {
            if poly.y_factor == 0 {
                self.out.push(Pending { m, prefix: prefix.to_vec(), entry: e, tail: Some(f.clone()), mult: self.mult });
            }
            return Ok(());
        }
        for edge in &poly.edges {
            let a = edge.slope.numer().to_u32().expect("small slope");
            let b = edge.slope.denom().to_u32().expect("small slope");
            // phi(w) = sum_k a_(j_end + b k) w^k
            let j_end = edge.end.1 as usize;
            let phi: CycloPoly = UniPoly::new(
                edge.face.coeffs()[j_end..].iter().step_by(b as usize).cloned().collect(),
            );
            let shift = b * edge.start.0 + a * edge.start.1;
            for (w, _) in face_roots(&phi, self.cap)? {
                let c = nth_root(&w, b, self.cap).ok_or_else(|| unsupported(&phi, self.cap))?;
                let cond = c.conductor().lcm(&f.conductor());
                if cond > self.cap {
                    return Err(unsupported(&phi, self.cap));
                }
                let next = substitute_step(f, a, b, &c, shift);
                let e2 = e * b as u64 + a as u64;
                let mut prefix2: Vec<(u64, CycloNumber)> =
                    prefix.iter().map(|(k, v)| (k * b as u64, v.clone())).collect();
                prefix2.push((e2, c));
                self.split(&next, m * b, &prefix2, e2)?;
            }
        }
        Ok(())
    }
}

impl Pending {
    /// `psi` correct through `t^upto`, or exact if the tail terminates.
    fn series(&self, upto: u64) -> PuiseuxSeries {
        let mut terms: Vec<(Rational, CycloNumber)> =
            self.prefix.iter().map(|(k, c)| (Rational::from_integer((*k).into()), c.clone())).collect();
        let Some(tail) = &self.tail else {
            return PuiseuxSeries::exact(terms);
        };
        let mut f = tail.clone();
        let mut e = self.entry;
        let mut dropped = false;
        let a01 = f.coeff(0, 1);
        loop {
            let budget = upto.saturating_sub(e);
            if f.degree_x().unwrap_or(0) as u64 > budget {
                f = f.truncate_x(budget as u32);
                dropped = true;
            }
            let q = f.terms().keys().filter(|&&(_, j)| j == 0).map(|&(i, _)| i).min();
            let Some(q) = q else {
                let trunc = if dropped { Some(Rational::from_integer(upto.into())) } else { None };
                return PuiseuxSeries::new(terms, trunc);
            };
            let c = f.coeff(q, 0).neg().div(&a01).expect("regular tail");
            e += q as u64;
            terms.push((Rational::from_integer(e.into()), c.clone()));
            f = substitute_step(&f, q, 1, &c, q);
        }
    }
}

/// Maximal conjugate coincidence of two branches, in the first branch's `t`.
fn pair_coincidence(b1: &BranchGerm, b2: &BranchGerm) -> Result<Rational> {
    let (m1, m2) = (b1.m(), b2.m());
    let l = m1.lcm(&m2);
    let y1 = b1.psi().reparameterize(l / m1, 1);
    let mut best = Rational::zero();
    for i in 1..=m2 as i64 {
        let conj = b2.conjugate(i).reparameterize(l / m2, 1);
        match y1.sub(&conj).valuation() {
            Valuation::Finite(v) => best = best.max(v),
            Valuation::Infinite => return Err(Error::NotDistinct("expansion produced equal branches".into())),
            Valuation::AboveTrunc(_) => return Err(Error::truncation("branches not yet separated")),
        }
    }
    Ok(best * Rational::new(m1.into(), l.into()))
}

fn floor_plus_one(q: &Rational) -> u64 {
    q.floor().to_integer().to_u64().unwrap_or(0) + 1
}

/// Newton–Puiseux expansion of the germ of `f` at the origin.
pub fn expand(f: &BivariatePoly, opts: &ExpandOptions) -> Result<ExpansionReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.constant_term().is_zero() {
        return Err(Error::GermNotVanishing);
    }
    if f.conductor() > opts.conductor_cap {
        return Err(Error::UnsupportedExtension { face: f.to_string(), cap: opts.conductor_cap });
    }
    let shear = choose_shear(f, opts.shear.as_ref())?;
    let g = match &shear {
        Some(a) => f.linear_change(&int(1), a, &int(0), &int(1)),
        None => f.clone(),
    };
    let target = opts.target_trunc.ceil().to_integer().to_u64().unwrap_or(0);

    let mut pending = Vec::new();
    for (part, mult) in squarefree_decomposition(&g)? {
        let mut s = Splitter { cap: opts.conductor_cap, mult, out: Vec::new() };
        s.split(&part, 1, &[], 0)?;
        pending.extend(s.out);
    }

    let mut bounds: Vec<u64> = pending.iter().map(|p| target.max(p.entry + 1)).collect();
    let mut branches: Vec<BranchGerm>;
    let mut rounds = 0;
    let coincidences = loop {
        branches = pending
            .iter()
            .zip(&bounds)
            .map(|(p, &t)| BranchGerm::new(p.m, p.series(t)))
            .collect::<Result<Vec<_>>>()?;
        let n = branches.len();
        let mut needed = bounds.clone();
        let mut short = false;
        for i in 0..n {
            for j in i + 1..n {
                match pair_coincidence(&branches[i], &branches[j]) {
                    Ok(c) => {
                        let cj = &c * Rational::new(branches[j].m().into(), branches[i].m().into());
                        needed[i] = needed[i].max(floor_plus_one(&c));
                        needed[j] = needed[j].max(floor_plus_one(&cj));
                    }
                    Err(Error::InsufficientTruncation(_)) => {
                        short = true;
                        needed[i] = needed[i].max(2 * bounds[i] + 1);
                        needed[j] = needed[j].max(2 * bounds[j] + 1);
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        if !short {
            break needed;
        }
        rounds += 1;
        if rounds > MAX_CERTIFY_ROUNDS {
            return Err(Error::truncation("branches did not separate within the expansion budget"));
        }
        bounds = needed;
    };

    let mut out: Vec<ExpandedBranch> = pending
        .iter()
        .zip(&coincidences)
        .zip(&branches)
        .map(|((p, &t), b)| {
            let psi = if b.psi().is_exact() { b.psi().clone() } else { b.psi().truncate(&Rational::from_integer(t.into())) };
            Ok(ExpandedBranch {
                branch: BranchGerm::new(p.m, psi)?,
                mult: p.mult,
                certified_trunc: Rational::from_integer(t.into()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_cached_key(|b| (b.branch.m(), b.mult, b.branch.psi().to_string()));

    for b in &out {
        check_residual(&g, b)?;
    }
    let total: u64 = out.iter().map(|b| b.mult as u64 * b.branch.m() as u64).sum();
    if Some(total) != g.multiplicity().map(u64::from) {
        return Err(Error::Inconsistent(format!(
            "branch multiplicities sum to {total}, the germ has multiplicity {:?}",
            g.multiplicity()
        )));
    }
    let germ = GermPresentation::new(
        out.iter().map(|b| Factor { branch: b.branch.clone(), mult: b.mult }).collect(),
    )?;
    Ok(ExpansionReport {
        branches: out,
        applied_shear: shear.map(|a| (a, Rational::zero())),
        polynomial: g,
        germ,
    })
}

/// Valuation of `f(t^m, psi(t))` with `psi` cut to a polynomial at the certified bound.
pub fn residual_valuation(f: &BivariatePoly, b: &ExpandedBranch) -> Valuation {
    let t = &b.certified_trunc + int(1);
    let psi = PuiseuxSeries::new(b.branch.psi().terms().to_vec(), Some(t.clone()));
    let x = PuiseuxSeries::new(
        vec![(int(b.branch.m() as i64), CycloNumber::from_int(1))],
        Some(t),
    );
    f.compose_series(&x, &psi).valuation()
}

fn check_residual(f: &BivariatePoly, b: &ExpandedBranch) -> Result<()> {
    let ok = match residual_valuation(f, b) {
        Valuation::Finite(v) => v > b.certified_trunc,
        Valuation::Infinite | Valuation::AboveTrunc(_) => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistent(format!(
            "residual of branch {} does not vanish beyond t^{}",
            b.branch.psi(),
            b.certified_trunc
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::characteristic_data;
    use crate::parser::parse_polynomial;
    use crate::ring::rat;

    fn p(s: &str) -> BivariatePoly {
        parse_polynomial(s).unwrap()
    }

    fn run(s: &str) -> ExpansionReport {
        expand(&p(s), &ExpandOptions { target_trunc: int(6), ..Default::default() }).unwrap()
    }

    #[test]
    fn polygon_examples() {
        let poly = newton_polygon(&p("y^2 - x^3")).unwrap();
        assert_eq!(poly.edges.len(), 1);
        assert_eq!(poly.edges[0].slope, rat(3, 2));
        assert_eq!(poly.edges[0].face.to_string(), "z^2 - 1");
        let poly = newton_polygon(&p("y*(y - x)")).unwrap();
        assert_eq!(poly.edges.len(), 1);
        assert_eq!(poly.edges[0].slope, int(1));
        assert_eq!(poly.edges[0].face.to_string(), "z^2 - z");
        assert_eq!(poly.y_factor, 1);
        assert_eq!(newton_polygon(&p("x")).unwrap().y_order, None);
    }

    #[test]
    fn cusp_and_its_square() {
        let r = run("y^2 - x^3");
        assert_eq!(r.branches.len(), 1);
        assert_eq!(r.branches[0].branch.m(), 2);
        assert_eq!(r.branches[0].branch.psi(), &PuiseuxSeries::monomial(CycloNumber::from_int(1), int(3)));
        assert_eq!(r.branches[0].mult, 1);
        let r = run("(y^2 - x^3)^2");
        assert_eq!(r.branches.len(), 1);
        assert_eq!(r.branches[0].mult, 2);
        assert!(r.applied_shear.is_none());
    }

    #[test]
    fn node_matches_binomial_series() {
        // y = +-x sqrt(1 + x) = +-(x + x^2/2 - x^3/8 + x^4/16 - ...)
        let r = run("y^2 - x^2 - x^3");
        assert_eq!(r.branches.len(), 2);
        let expected = [int(1), rat(1, 2), rat(-1, 8), rat(1, 16), rat(-5, 128)];
        for b in &r.branches {
            assert_eq!(b.branch.m(), 1);
            let sign = b.branch.psi().leading_coeff().unwrap().as_rational().unwrap();
            for (k, c) in expected.iter().enumerate() {
                let got = b.branch.psi().coeff(&int(k as i64 + 1)).unwrap();
                assert_eq!(got, CycloNumber::rational(c * &sign));
            }
        }
        assert_eq!(r.germ.intersection_matrix()[0][1], 1);
    }

    #[test]
    fn shear_for_vertical_components() {
        let r = run("x*(y^2 - x^3)");
        assert_eq!(r.applied_shear, Some((int(1), int(0))));
        let total: u32 = r.branches.iter().map(|b| b.mult * b.branch.m()).sum();
        assert_eq!(total, 3);
        let r = run("x^2 - y^3");
        assert!(r.applied_shear.is_some());
        assert_eq!(characteristic_data(&r.branches[0].branch).unwrap().pairs(), vec![(3, 1)]);
    }

    #[test]
    fn two_pairs_and_cyclotomic_roots() {
        let r = run("(y^2 - x^3)^2 - x^7");
        assert_eq!(r.branches.len(), 2);
        let r = run("(y^2 - x^3)^2 - x^5*y");
        assert_eq!(r.branches.len(), 1);
        assert_eq!(characteristic_data(&r.branches[0].branch).unwrap().pairs(), vec![(6, 2), (7, 1)]);
        let r = run("y^3 - x^3");
        assert_eq!(r.branches.len(), 3);
        assert!(r.branches.iter().any(|b| b.branch.psi().conductor() == 3));
        let r = run("y^2 + x^2");
        assert_eq!(r.branches.len(), 2);
    }

    #[test]
    fn unsupported_faces_are_reported() {
        let err = expand(&p("y^3 - 2*x^3"), &ExpandOptions::default()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedExtension { .. }));
    }

    #[test]
    fn input_errors() {
        assert_eq!(expand(&p("1 + y"), &ExpandOptions::default()).unwrap_err(), Error::GermNotVanishing);
        assert_eq!(expand(&BivariatePoly::zero(), &ExpandOptions::default()).unwrap_err(), Error::ZeroPolynomial);
    }
}
