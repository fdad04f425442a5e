use num_traits::Zero;

use super::lvalue::{completed_lvalues, NewformData};
use super::special::c_k;
use crate::cosets::Mat2;
use crate::error::{Error, Result};
use crate::exactalg::{binomial, ComplexBall, Rational, Scalar};
use crate::polyspace::{pair_braces_poly, PolyVector};

/// Sign of an ε-eigenspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Plus,
    Minus,
}

/// r_{I,n}(f) = i^{n+1}Λ(n+1, f) for 0 ≤ n ≤ w.
pub fn identity_periods(f: &NewformData, terms: usize) -> Result<Vec<ComplexBall>> {
    let ls = completed_lvalues(f, terms)?;
    Ok(ls.iter().enumerate().map(|(n, l)| ComplexBall::i_pow(n as i64 + 1).mul(&l.value)).collect())
}

/// Coefficients of ρ_f(I)(X) = Σ_j (−1)^j C(w,j) r_{I,w−j} X^j.
pub fn rho_identity(r: &[ComplexBall]) -> Vec<ComplexBall> {
    let w = r.len() - 1;
    (0..=w)
        .map(|j| {
            let c = crate::exactalg::to_f64(&binomial(w as u64, j as u64));
            r[w - j].scale(if j % 2 == 0 { c } else { -c })
        })
        .collect()
}

/// Periods of f together with the exact eigen-polynomials they scale.
#[derive(Clone, Debug)]
pub struct FormPeriods {
    pub weight: i64,
    pub omega_plus: ComplexBall,
    pub omega_minus: ComplexBall,
    pub p_plus: PolyVector,
    pub p_minus: PolyVector,
    /// r_{I,n}(f), n = 0..w.
    pub periods: Vec<ComplexBall>,
    /// max_j |ρ_f(I)[X^j] − ω⁺P⁺(I)[X^j] − ω⁻P⁻(I)[X^j]|.
    pub identity_residual: f64,
}

fn identity_value(p: &PolyVector) -> Result<Vec<ComplexBall>> {
    Ok(p.value_at(&Mat2::IDENTITY)?.0.iter().map(|x| x.to_complex()).collect())
}

/// ω = ρ(I)[X^j] / P(I)[X^j] at the first j of the given parity where P(I) is nonzero.
fn omega_from(rho: &[ComplexBall], p: &[ComplexBall], parity: usize) -> Result<ComplexBall> {
    for j in (parity..rho.len()).step_by(2) {
        if p[j].abs() > p[j].err {
            if rho[j].abs() <= rho[j].err {
                return Err(Error::Numerical(format!("designated period X^{j} is numerically zero")));
            }
            return rho[j].div(&p[j]).ok_or_else(|| Error::Numerical("division by zero".into()));
        }
    }
    Err(Error::Numerical("no coordinate of the required parity is available".into()))
}

/// ω± with ρ_f^± = ω±P±, read off the identity coset.
pub fn period_and_omega(f: &NewformData, p_plus: &PolyVector, p_minus: &PolyVector, terms: usize) -> Result<FormPeriods> {
    let k = f.weight;
    if p_plus.space().weight() != k || p_minus.space().weight() != k {
        return Err(Error::Invalid("eigen-polynomials have the wrong weight".into()));
    }
    let periods = identity_periods(f, terms)?;
    let rho = rho_identity(&periods);
    let pp = identity_value(p_plus)?;
    let pm = identity_value(p_minus)?;
    let omega_plus = omega_from(&rho, &pp, 0)?;
    let omega_minus = omega_from(&rho, &pm, 1)?;
    let identity_residual = rho
        .iter()
        .zip(pp.iter().zip(&pm))
        .map(|(r, (a, b))| r.dist(&omega_plus.mul(a).add(&omega_minus.mul(b))))
        .fold(0.0, f64::max);
    Ok(FormPeriods { weight: k, omega_plus, omega_minus, p_plus: p_plus.clone(), p_minus: p_minus.clone(), periods, identity_residual })
}

impl FormPeriods {
    fn part(&self, p: Parity) -> (ComplexBall, &PolyVector) {
        match p {
            Parity::Plus => (self.omega_plus, &self.p_plus),
            Parity::Minus => (self.omega_minus, &self.p_minus),
        }
    }

    /// ρ_f = ω⁺P⁺ + ω⁻P⁻ as a complex vector.
    pub fn rho(&self) -> Result<PolyVector> {
        self.p_plus.scale(&Scalar::Complex(self.omega_plus)).add(&self.p_minus.scale(&Scalar::Complex(self.omega_minus)))
    }
}

fn admissible(k: i64, kappa: (Parity, Parity)) -> bool {
    (kappa.0 == kappa.1) == (k % 2 != 0)
}

/// (f, g) = ω_f^{κ₁}·conj(ω_g^{κ₂})·{P_f^{κ₁}, conj P_g^{κ₂}} / (3C_k).
pub fn petersson_product(f: &FormPeriods, g: &FormPeriods, kappa: (Parity, Parity)) -> Result<ComplexBall> {
    let k = f.weight;
    if g.weight != k {
        return Err(Error::Invalid("forms of different weights".into()));
    }
    if !admissible(k, kappa) {
        return Err(Error::Invalid(format!(
            "parities {:?} are not admissible for weight {k}: even weight needs opposite signs, odd weight equal ones",
            kappa
        )));
    }
    let (wf, pf) = f.part(kappa.0);
    let (wg, pg) = g.part(kappa.1);
    let braces = pair_braces_poly(pf, &pg.conj())?.to_complex();
    let num = wf.mul(&wg.conj()).mul(&braces);
    num.div(&c_k(k).scale(3.0)).ok_or_else(|| Error::Numerical("C_k vanished".into()))
}

/// (f, g) from the full pairing: {ρ_f, conj ρ_g} / (6C_k).
pub fn haberland_full(f: &FormPeriods, g: &FormPeriods) -> Result<ComplexBall> {
    let braces = pair_braces_poly(&f.rho()?, &g.rho()?.conj())?.to_complex();
    braces.div(&c_k(f.weight).scale(6.0)).ok_or_else(|| Error::Numerical("C_k vanished".into()))
}

/// {ρ_f, ρ_g} without conjugation (vanishes for cusp forms).
pub fn braces_unconjugated(f: &FormPeriods, g: &FormPeriods) -> Result<ComplexBall> {
    Ok(pair_braces_poly(&f.rho()?, &g.rho()?)?.to_complex())
}

/// {ρ_f^a, conj ρ_g^b} for arbitrary parities.
pub fn braces_parts(f: &FormPeriods, g: &FormPeriods, a: Parity, b: Parity) -> Result<ComplexBall> {
    let (wf, pf) = f.part(a);
    let (wg, pg) = g.part(b);
    Ok(wf.mul(&wg.conj()).mul(&pair_braces_poly(pf, &pg.conj())?.to_complex()))
}

/// Exact r⁺_{A,n}/r_{I,w} = P⁺(A)[X^{w−n}] / ((−1)^{w−n}C(w,n)) for every coset A,
/// with P⁺ normalized so that P⁺(I)[X⁰] = 1.
pub fn period_ratios(p_plus: &PolyVector, n: usize) -> Result<Vec<Rational>> {
    let w = p_plus.w();
    if n > w {
        return Err(Error::Invalid(format!("n = {n} exceeds w = {w}")));
    }
    let norm = p_plus.value_at(&Mat2::IDENTITY)?.0[0].as_rational().ok_or_else(|| Error::Invalid("rational polynomial expected".into()))?;
    if norm.is_zero() {
        return Err(Error::ZeroNormalization);
    }
    let mut c = binomial(w as u64, n as u64) * &norm;
    if (w - n) % 2 == 1 {
        c = -c;
    }
    let sp = p_plus.space();
    (0..sp.index())
        .map(|l| {
            let x = p_plus.value(l).0[w - n].as_rational().ok_or_else(|| Error::Invalid("rational polynomial expected".into()))?;
            Ok(x / &c)
        })
        .collect()
}

/// Whether all numerators are divisible by p after clearing the common denominator.
pub fn numerators_divisible(ratios: &[Rational], p: i64) -> bool {
    let den = ratios.iter().fold(num_bigint::BigInt::from(1), |acc, r| num_integer::Integer::lcm(&acc, r.denom()));
    let p = num_bigint::BigInt::from(p);
    ratios.iter().all(|r| ((r.numer() * (&den / r.denom())) % &p).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::qseries::eta_product;
    use crate::cosets::{CosetSpace, GroupKind};
    use crate::exactalg::int;
    use crate::hecke::{common_eigen_polynomial, Normalization};
    use crate::polyspace::{build_w, eps_split};
    use std::sync::Arc;

    pub(crate) fn level5() -> (NewformData, PolyVector, PolyVector) {
        let sp = Arc::new(CosetSpace::build(GroupKind::Gamma0, 5, 4).unwrap());
        let w = build_w(&sp).unwrap();
        let (wp, wm) = eps_split(&w).unwrap();
        let pp = common_eigen_polynomial(&wp, &[(2, Scalar::from(-4))], Normalization::Plus).unwrap();
        let pm = common_eigen_polynomial(&wm, &[], Normalization::Minus).unwrap();
        let f = NewformData::new(5, 4, Some(1), eta_product(&[(1, 4), (5, 4)], 200).unwrap()).unwrap();
        (f, pp, pm)
    }

    #[test]
    fn level_five_omegas() {
        let (f, pp, pm) = level5();
        let per = period_and_omega(&f, &pp, &pm, 200).unwrap();
        assert!(per.omega_plus.re.abs() < 1e-12);
        assert!((per.omega_plus.im + 0.0051365773).abs() < 1e-8, "{}", per.omega_plus);
        assert!((per.omega_minus.re - 0.0208651386).abs() < 1e-8, "{}", per.omega_minus);
        assert!(per.omega_minus.im.abs() < 1e-12);
        assert!(per.identity_residual < 1e-12);
    }

    #[test]
    fn level_five_petersson() {
        let (f, pp, pm) = level5();
        let per = period_and_omega(&f, &pp, &pm, 200).unwrap();
        let a = petersson_product(&per, &per, (Parity::Plus, Parity::Minus)).unwrap();
        let b = petersson_product(&per, &per, (Parity::Minus, Parity::Plus)).unwrap();
        assert!((a.re - 0.00014513335).abs() < 1e-9, "{a}");
        assert!(a.im.abs() < 1e-12);
        assert!(a.dist(&b) < 1e-10);
        assert!(petersson_product(&per, &per, (Parity::Plus, Parity::Plus)).is_err());
        let full = haberland_full(&per, &per).unwrap();
        assert!(full.dist(&a) < 1e-10 + full.err + a.err);
        assert!(braces_unconjugated(&per, &per).unwrap().abs() < 1e-9);
        assert!(braces_parts(&per, &per, Parity::Plus, Parity::Plus).unwrap().abs() < 1e-9);
        assert!(braces_parts(&per, &per, Parity::Minus, Parity::Minus).unwrap().abs() < 1e-9);
    }

    #[test]
    fn omega_phases_for_real_coefficients() {
        let (f, pp, pm) = level5();
        let per = period_and_omega(&f, &pp, &pm, 200).unwrap();
        // ω⁺ ∈ i^{k+1}ℝ, ω⁻ ∈ i^kℝ
        let rot_p = per.omega_plus.div(&ComplexBall::i_pow(5)).unwrap();
        let rot_m = per.omega_minus.div(&ComplexBall::i_pow(4)).unwrap();
        assert!(rot_p.im.abs() <= 1e-9 * rot_p.abs());
        assert!(rot_m.im.abs() <= 1e-9 * rot_m.abs());
    }

    #[test]
    fn congruence_mod_13() {
        let (f, pp, _) = level5();
        let ratios = period_ratios(&pp, 1).unwrap();
        assert!(numerators_divisible(&ratios, 13));
        assert!(ratios.iter().any(|r| !r.is_zero()));
        let zero_ratios = period_ratios(&pp, 2).unwrap();
        assert_eq!(zero_ratios[sp_identity(&pp)], int(1));
        assert!(!numerators_divisible(&zero_ratios, 13));
        let e4 = crate::analytic::eisenstein_qexp(4, 1, 10).unwrap();
        let e = e4.sub(&e4.rescale(5).unwrap().truncate(10));
        for n in 1..=10 {
            assert!(crate::analytic::congruent_mod(f.q.coeff(n).unwrap(), e.coeff(n).unwrap(), 13), "n = {n}");
        }
    }

    fn sp_identity(p: &PolyVector) -> usize {
        p.space().label_of(&Mat2::IDENTITY).unwrap().0
    }
}
