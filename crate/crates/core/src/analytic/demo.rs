use std::f64::consts::PI;
use std::sync::Arc;

use serde_json::{json, Value};

use super::special::{zeta, zeta_at_nonpositive, zeta_prime_negative_even};
use crate::cosets::{cusp_classes, CosetSpace, GroupKind, Mat2};
use crate::error::{Error, Result};
use crate::exactalg::{bernoulli, int, rat, to_f64, ComplexBall, Rational, Scalar};
use crate::polyspace::{build_w_extended, coboundary_of, extended_relation_residual, ExtPolyVector, PolyVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemoCase {
    Gamma06,
    FullLevel(i64),
}

impl std::str::FromStr for DemoCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "gamma06" {
            return Ok(DemoCase::Gamma06);
        }
        if let Some(k) = s.strip_prefix("fulllevel") {
            let k = k.trim_matches(|c| c == '(' || c == ')' || c == ':' || c == '=');
            return k.parse().map(DemoCase::FullLevel).map_err(|_| Error::Parse(format!("bad weight in {s:?}")));
        }
        Err(Error::Invalid(format!("unknown demo case {s:?}")))
    }
}

/// Σ cⱼ bⱼ^{1−s}; multiplied by ζ(s) its value at s = 1 is −Σ cⱼ ln bⱼ when Σ cⱼ = 0.
#[derive(Clone, Debug)]
struct DirichletFactor(Vec<(i64, Rational)>);

impl DirichletFactor {
    /// 1 − t^{1−s}.
    fn oldform(t: i64) -> Self {
        DirichletFactor(vec![(1, int(1)), (-1, int(t))])
    }

    fn limit_at_one(&self) -> Result<f64> {
        if self.0.iter().map(|(c, _)| c).sum::<i64>() != 0 {
            return Err(Error::Numerical("ζ(s) times this factor has a pole at s = 1".into()));
        }
        Ok(-self.0.iter().map(|(c, b)| *c as f64 * to_f64(b).ln()).sum::<f64>())
    }
}

/// One Eisenstein series E₂^t in the Γ₀(6) example, in units of C.
#[derive(Clone, Debug)]
pub struct Gamma06Entry {
    pub t: i64,
    /// d_i = ρ⁺(E₂^t)(A_i)/C where an L-identity determines it.
    pub d: Vec<Option<f64>>,
    /// Coordinates on {P₁, P₂, P₃}.
    pub coords: [f64; 3],
    /// Largest misfit of the available d_i against the decomposition.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct Gamma06Report {
    pub c: ComplexBall,
    /// A_j S = A_{σ(j)} (1-based).
    pub sigma: Vec<usize>,
    /// ε A_j ε ∈ Γ A_{τ(j)} (1-based).
    pub tau: Vec<usize>,
    /// P_i(A_j) for i = 1, 2, 3.
    pub basis: Vec<Vec<Rational>>,
    pub entries: Vec<Gamma06Entry>,
    /// max |coords(E₂⁶) − coords(E₂²) − coords(E₂³)|.
    pub additivity_residual: f64,
}

/// A_j = ST^{−i}S·{I, U², U} for i = 0, 1, 2 and ST^{−3}S·{U², U, I}; this
/// ordering of the last triple is the one compatible with σ, τ and with
/// A₆, A₇, A₁₁ ∈ Γ₀(2), A₉, A₁₂ ∈ Γ₀(3).
fn gamma06_reps() -> Vec<Mat2> {
    let mut out = Vec::new();
    for i in 0..4 {
        let base = Mat2::S.mul(&Mat2::T_INV.pow(i)).mul(&Mat2::S);
        let tail = if i < 3 { [Mat2::IDENTITY, Mat2::U2, Mat2::U] } else { [Mat2::U2, Mat2::U, Mat2::IDENTITY] };
        for g in tail {
            out.push(base.mul(&g));
        }
    }
    out
}

fn index_of(space: &CosetSpace, labels: &[usize], g: &Mat2) -> Result<usize> {
    let (l, _) = space.label_of(g)?;
    labels.iter().position(|&x| x == l).map(|j| j + 1).ok_or_else(|| Error::Numerical("coset not among the representatives".into()))
}

/// Least squares for x ∈ ℝ³ from rows (a, d) with a·x = d.
fn solve3(rows: &[([f64; 3], f64)]) -> Result<([f64; 3], f64)> {
    let mut m = [[0.0; 4]; 3];
    for (a, d) in rows {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += a[i] * a[j];
            }
            m[i][3] += a[i] * d;
        }
    }
    for c in 0..3 {
        let p = (c..3).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        if m[p][c].abs() < 1e-12 {
            return Err(Error::Numerical("the available d-constants do not determine the decomposition".into()));
        }
        m.swap(c, p);
        for r in 0..3 {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..4 {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
    }
    let x = [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]];
    let res = rows.iter().map(|(a, d)| (a[0] * x[0] + a[1] * x[1] + a[2] * x[2] - d).abs()).fold(0.0, f64::max);
    Ok((x, res))
}

/// The Γ₀(6), k = 2 example: ρ⁺(E₂^t) for t = 2, 3, 6 on the coboundary basis.
pub fn gamma06_demo() -> Result<Gamma06Report> {
    let space = Arc::new(CosetSpace::build(GroupKind::Gamma0, 6, 2)?);
    let reps = gamma06_reps();
    let labels: Vec<usize> = reps.iter().map(|a| space.label_of(a).map(|x| x.0)).collect::<Result<_>>()?;
    let sigma = reps.iter().map(|a| index_of(&space, &labels, &a.mul(&Mat2::S))).collect::<Result<Vec<_>>>()?;
    let tau = reps.iter().map(|a| index_of(&space, &labels, &a.eps_conj())).collect::<Result<Vec<_>>>()?;

    // cusps c₁ = [A₁], c₂ = [A₉], c₃ = [A₆]
    let cusps = cusp_classes(&space);
    let mut basis = Vec::new();
    for j in [1usize, 9, 6] {
        let class = cusps.class_of(labels[j - 1]);
        let consts: Vec<Rational> =
            (0..space.index()).map(|l| if cusps.class_of(l) == class { int(1) } else { int(0) }).collect();
        let p: PolyVector = coboundary_of(&space, &consts)?;
        let d = reps
            .iter()
            .map(|a| p.value_at(a)?.0[0].as_rational().ok_or_else(|| Error::Numerical("coboundary is rational".into())))
            .collect::<Result<Vec<_>>>()?;
        basis.push(d);
    }

    let c = ComplexBall::real(-to_f64(&zeta_at_nonpositive(0))).div(&ComplexBall::exact(0.0, 2.0 * PI)).expect("nonzero");
    let mut entries = Vec::new();
    for t in [2i64, 3, 6] {
        // e_i = ρ(E₂^t)(A_i)/C where L(s, E₂^t|A_i) = ζ(s)ζ(s−1)·factor
        let mut e: Vec<Option<f64>> = vec![None; 12];
        for (j, a) in reps.iter().enumerate() {
            if a.c % t == 0 {
                e[j] = Some(DirichletFactor::oldform(t).limit_at_one()?);
            }
        }
        if t == 6 {
            let a9 = DirichletFactor(vec![(1, int(1)), (-1, rat(3, 2))]);
            let a12 = DirichletFactor(vec![(1, int(1)), (-3, int(3)), (1, rat(3, 2)), (1, int(6))]);
            e[8] = Some(a9.limit_at_one()?);
            e[11] = Some(a12.limit_at_one()?);
        }
        let d: Vec<Option<f64>> = (0..12).map(|j| Some((e[j]? + e[tau[j] - 1]?) / 2.0)).collect();
        let rows: Vec<([f64; 3], f64)> = (0..12)
            .filter_map(|j| d[j].map(|dj| ([to_f64(&basis[0][j]), to_f64(&basis[1][j]), to_f64(&basis[2][j])], dj)))
            .collect();
        let (coords, residual) = solve3(&rows)?;
        entries.push(Gamma06Entry { t, d, coords, residual });
    }
    let additivity_residual =
        (0..3).map(|i| (entries[2].coords[i] - entries[0].coords[i] - entries[1].coords[i]).abs()).fold(0.0, f64::max);
    Ok(Gamma06Report { c, sigma, tau, basis, entries, additivity_residual })
}

#[derive(Clone, Debug)]
pub struct FullLevelReport {
    pub weight: i64,
    pub constant_term: Rational,
    /// w̃r_{E_k}(I) as Laurent coefficients X^{−1}, X⁰, …, X^{w+1}.
    pub laurent: Vec<ComplexBall>,
    pub dim_w_ext: usize,
    /// Distance to the span of the computed W̃ basis.
    pub membership_residual: f64,
    /// Largest value of the extended period relations.
    pub relation_residual: f64,
}

/// r_{I,n}(E_k) = i^{n+1}(2π)^{−n−1} n! ζ(n+1)ζ(n+2−k), with ζ(s)ζ(s−k+1) → ζ′(2−k) at s = 1.
fn eisenstein_identity_period(k: i64, n: i64) -> Result<ComplexBall> {
    let s = n + 1;
    let l = if s == 1 {
        zeta_prime_negative_even(((k - 2) / 2) as u32)?
    } else {
        zeta(s as f64)? * to_f64(&zeta_at_nonpositive((k - 1 - s) as u32))
    };
    let fact: f64 = (1..=n).map(|j| j as f64).product();
    Ok(ComplexBall::i_pow(s).scale(fact * l / (2.0 * PI).powi(s as i32)))
}

/// Builds w̃r of the level-one E_k and measures its distance to W̃.
pub fn fulllevel_demo(k: i64) -> Result<FullLevelReport> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::Invalid(format!("full-level Eisenstein series need even k >= 4, got {k}")));
    }
    let space = Arc::new(CosetSpace::build(GroupKind::Gamma0, 1, k)?);
    let w = (k - 2) as usize;
    let a0 = -bernoulli(k as usize) / int(2 * k);
    let r = (0..=w as i64).map(|n| eisenstein_identity_period(k, n)).collect::<Result<Vec<_>>>()?;
    let rho = super::periods::rho_identity(&r);
    let tail = to_f64(&a0) / (w + 1) as f64;
    let top = if w % 2 == 0 { tail } else { -tail };
    let mut laurent = vec![ComplexBall::real(tail)];
    laurent.extend(rho.iter().copied());
    laurent.push(ComplexBall::real(top));

    let mut flat: Vec<Scalar> = rho.iter().map(|z| Scalar::Complex(*z)).collect();
    flat.push(Scalar::Complex(ComplexBall::real(top)));
    let v = ExtPolyVector::from_flat(&space, flat.clone())?;
    let relation_residual = extended_relation_residual(&v)?;

    let wt = build_w_extended(&space)?;
    let x: Vec<ComplexBall> = flat.iter().map(|s| s.to_complex()).collect();
    let mut rest = x.clone();
    for (p, b) in wt.pivots().iter().zip(wt.basis()) {
        let c = x[*p];
        for (o, bj) in rest.iter_mut().zip(b) {
            *o = o.sub(&c.mul(&bj.to_complex()));
        }
    }
    let scale = x.iter().map(|z| z.abs()).fold(0.0, f64::max);
    let membership_residual = rest.iter().map(|z| z.abs()).fold(0.0, f64::max) / scale.max(f64::MIN_POSITIVE);
    Ok(FullLevelReport { weight: k, constant_term: a0, laurent, dim_w_ext: wt.dim(), membership_residual, relation_residual })
}

#[derive(Clone, Debug)]
pub enum DemoReport {
    Gamma06(Gamma06Report),
    FullLevel(FullLevelReport),
}

pub fn eisenstein_period_demo(case: DemoCase) -> Result<DemoReport> {
    match case {
        DemoCase::Gamma06 => gamma06_demo().map(DemoReport::Gamma06),
        DemoCase::FullLevel(k) => fulllevel_demo(k).map(DemoReport::FullLevel),
    }
}

fn cz(z: &ComplexBall) -> Value {
    json!({"re": z.re, "im": z.im, "err": z.err})
}

impl DemoReport {
    pub fn to_json(&self) -> Value {
        match self {
            DemoReport::Gamma06(r) => json!({
                "case": "gamma06",
                "C": cz(&r.c),
                "sigma": r.sigma,
                "tau": r.tau,
                "basis": r.basis.iter().map(|d| d.iter().map(crate::exactalg::format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "series": r.entries.iter().map(|e| json!({
                    "t": e.t,
                    "d_over_C": e.d,
                    "coords_over_C": e.coords,
                    "residual": e.residual,
                })).collect::<Vec<_>>(),
                "additivity_residual": r.additivity_residual,
            }),
            DemoReport::FullLevel(r) => json!({
                "case": format!("fulllevel({})", r.weight),
                "constant_term": crate::exactalg::format_rational(&r.constant_term),
                "laurent": r.laurent.iter().map(cz).collect::<Vec<_>>(),
                "dim_w_ext": r.dim_w_ext,
                "membership_residual": r.membership_residual,
                "relation_residual": r.relation_residual,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma06_permutations_and_basis() {
        let r = gamma06_demo().unwrap();
        assert_eq!(r.sigma, vec![3, 4, 1, 2, 7, 10, 5, 12, 11, 6, 9, 8]);
        assert_eq!(r.tau, vec![1, 4, 3, 2, 10, 7, 6, 8, 9, 5, 11, 12]);
        let nz = |d: &Vec<Rational>| -> Vec<(usize, i64)> {
            d.iter().enumerate().filter(|(_, x)| **x != int(0)).map(|(j, x)| (j + 1, x.to_integer().try_into().unwrap())).collect()
        };
        assert_eq!(nz(&r.basis[0]), vec![(1, 1), (3, -1)]);
        assert_eq!(nz(&r.basis[1]), vec![(8, -1), (9, 1), (11, -1), (12, 1)]);
        assert_eq!(nz(&r.basis[2]), vec![(5, -1), (6, 1), (7, 1), (9, -1), (10, -1), (11, 1)]);
    }

    #[test]
    fn gamma06_decompositions() {
        let r = gamma06_demo().unwrap();
        // C = −ζ(0)/(2πi) = 1/(4πi)
        assert!(r.c.re.abs() < 1e-15 && (r.c.im + 1.0 / (4.0 * PI)).abs() < 1e-15);
        let (l2, l3, l6) = (2f64.ln(), 3f64.ln(), 6f64.ln());
        for e in &r.entries {
            assert!((e.d[0].unwrap() - (e.t as f64).ln()).abs() < 1e-10);
            assert!(e.residual < 1e-10);
        }
        let close = |a: [f64; 3], b: [f64; 3]| a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-10);
        assert!(close(r.entries[0].coords, [l2, 0.0, l2]));
        assert!(close(r.entries[1].coords, [l3, l3, 0.0]));
        assert!(close(r.entries[2].coords, [l6, l3, l2]));
        assert!((r.entries[2].d[8].unwrap() - (l3 - l2)).abs() < 1e-10);
        assert!((r.entries[2].d[11].unwrap() - l3).abs() < 1e-10);
        assert!(r.additivity_residual < 1e-10);
    }

    #[test]
    fn gamma06_membership_facts() {
        let reps = gamma06_reps();
        for j in [6, 7, 11] {
            assert_eq!(reps[j - 1].c % 2, 0, "A_{j}");
        }
        for j in [9, 12] {
            assert_eq!(reps[j - 1].c % 3, 0, "A_{j}");
        }
    }

    #[test]
    fn limit_rule_rejects_poles() {
        assert!(DirichletFactor(vec![(1, int(1))]).limit_at_one().is_err());
    }

    #[test]
    fn full_level_e12_in_extended_space() {
        let r = fulllevel_demo(12).unwrap();
        assert_eq!(r.dim_w_ext, 4);
        assert!(r.membership_residual < 1e-8, "{}", r.membership_residual);
        assert!(r.relation_residual < 1e-8, "{}", r.relation_residual);
    }

    #[test]
    fn full_level_negative_control() {
        // flipping the constant-term tail must leave W̃
        let r = fulllevel_demo(12).unwrap();
        let space = Arc::new(CosetSpace::build(GroupKind::Gamma0, 1, 12).unwrap());
        let mut flat: Vec<Scalar> = r.laurent[1..r.laurent.len() - 1].iter().map(|z| Scalar::Complex(*z)).collect();
        flat.push(Scalar::Complex(r.laurent.last().unwrap().neg()));
        let v = ExtPolyVector::from_flat(&space, flat).unwrap();
        assert!(extended_relation_residual(&v).unwrap() > 1e-6);
    }

    #[test]
    fn other_full_level_weights() {
        for k in [4, 6, 8, 10, 16] {
            let r = fulllevel_demo(k).unwrap();
            assert!(r.membership_residual < 1e-8, "k = {k}: {}", r.membership_residual);
        }
        assert!(fulllevel_demo(5).is_err());
    }

    #[test]
    fn case_parsing() {
        assert_eq!("gamma06".parse::<DemoCase>().unwrap(), DemoCase::Gamma06);
        assert_eq!("fulllevel(12)".parse::<DemoCase>().unwrap(), DemoCase::FullLevel(12));
        assert_eq!("fulllevel:8".parse::<DemoCase>().unwrap(), DemoCase::FullLevel(8));
        assert!("gamma07".parse::<DemoCase>().is_err());
    }
}
