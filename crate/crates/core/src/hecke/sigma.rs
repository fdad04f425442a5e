use crate::cosets::{CosetSpace, GroupKind, Mat2, Signed};
use crate::error::{Error, Result};
use crate::exactalg::{gcd, inv_mod};

/// Which double coset Σₙ the action is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaKind {
    Delta,
    DeltaVee,
    /// Atkin–Lehner Θₙ with the chosen w_n.
    Theta(Mat2),
    /// Diamond ⟨d⟩ (determinant 1).
    Diamond(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaSpec {
    pub kind: SigmaKind,
    pub group: GroupKind,
    pub level: i64,
    pub n: i64,
}

fn theta_shape(m: &Mat2, group: GroupKind, level: i64, n: i64) -> bool {
    let np = level / n;
    let base = m.det() == n && m.a % n == 0 && m.d % n == 0 && m.c % level == 0;
    base && (group == GroupKind::Gamma0 || ((m.a - 1) % np == 0 && (m.b - 1) % n == 0))
}

impl SigmaSpec {
    pub fn delta(space: &CosetSpace, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Invalid(format!("n must be positive, got {n}")));
        }
        Ok(SigmaSpec { kind: SigmaKind::Delta, group: space.kind(), level: space.level(), n })
    }

    pub fn delta_vee(space: &CosetSpace, n: i64) -> Result<Self> {
        if n < 1 || gcd(n, space.level()) != 1 {
            return Err(Error::Invalid(format!("the adjoint double coset needs gcd(n, N) = 1, got n = {n}")));
        }
        Ok(SigmaSpec { kind: SigmaKind::DeltaVee, group: space.kind(), level: space.level(), n })
    }

    /// Θₙ for n‖N with the smallest w_n = (nx y; Nz nt) found.
    pub fn theta(space: &CosetSpace, n: i64) -> Result<Self> {
        let level = space.level();
        if n < 1 || level % n != 0 || gcd(n, level / n) != 1 {
            return Err(Error::Invalid(format!("Atkin-Lehner needs n || N, got n = {n}, N = {level}")));
        }
        let group = space.kind();
        let bound = 2 * level + 2;
        for r in 0..=bound {
            for x in -r..=r {
                for y in -r..=r {
                    for z in -r..=r {
                        if x.abs().max(y.abs()).max(z.abs()) != r || x == 0 {
                            continue;
                        }
                        // n x t − n′ y z = 1
                        let num = 1 + (level / n) * y * z;
                        if num % (n * x) != 0 {
                            continue;
                        }
                        let t = num / (n * x);
                        let m = Mat2::new(n * x, y, level * z, n * t);
                        if theta_shape(&m, group, level, n) {
                            return Ok(SigmaSpec { kind: SigmaKind::Theta(m), group, level, n });
                        }
                    }
                }
            }
        }
        Err(Error::Invalid(format!("no w_n found for n = {n}, N = {level}")))
    }

    pub fn theta_with(space: &CosetSpace, w: Mat2) -> Result<Self> {
        let n = w.det();
        let level = space.level();
        if n < 1 || level % n != 0 || gcd(n, level / n) != 1 || !theta_shape(&w, space.kind(), level, n) {
            return Err(Error::Invalid(format!("{w} does not have the Atkin-Lehner shape for N = {level}")));
        }
        Ok(SigmaSpec { kind: SigmaKind::Theta(w), group: space.kind(), level, n })
    }

    pub fn diamond(space: &CosetSpace, d: i64) -> Result<Self> {
        if gcd(d, space.level()) != 1 {
            return Err(Error::Invalid(format!("diamond needs d prime to N, got {d}")));
        }
        Ok(SigmaSpec { kind: SigmaKind::Diamond(d), group: space.kind(), level: space.level(), n: 1 })
    }

    fn check(&self, space: &CosetSpace) -> Result<()> {
        if space.level() != self.level || space.kind() != self.group {
            return Err(Error::Invalid(format!(
                "double coset for {}({}) applied on {}({})",
                self.group,
                self.level,
                space.kind(),
                space.level()
            )));
        }
        Ok(())
    }

    /// Membership of g in Σₙ by its congruence description.
    pub fn contains(&self, g: &Mat2) -> bool {
        let nn = self.level;
        let m = |x: i64| x.rem_euclid(nn);
        let g0 = self.group == GroupKind::Gamma0;
        match self.kind {
            SigmaKind::Delta => g.det() == self.n && m(g.c) == 0 && if g0 { gcd(g.a, nn) == 1 } else { m(g.a - 1) == 0 },
            SigmaKind::DeltaVee => {
                g.det() == self.n && m(g.c) == 0 && if g0 { gcd(g.d, nn) == 1 } else { m(g.d - 1) == 0 }
            }
            SigmaKind::Theta(_) => theta_shape(g, self.group, nn, self.n),
            SigmaKind::Diamond(d) => {
                g.det() == 1 && m(g.c) == 0 && if g0 { gcd(g.d, nn) == 1 } else { m(g.d - d) == 0 }
            }
        }
    }
}

/// A_M for MA⁻¹ = A_M⁻¹M_A by trying every coset: A′ M A⁻¹ ∈ Σₙ.
pub fn resolve_by_search(space: &CosetSpace, label: usize, m: &Mat2, spec: &SigmaSpec) -> Result<Option<Signed>> {
    spec.check(space)?;
    let ainv = space.lift(label).vee();
    let signs: &[i8] = if space.contains_minus_one() { &[1] } else { &[1, -1] };
    for l in 0..space.index() {
        for &s in signs {
            let a = if s == 1 { space.lift(l) } else { space.lift(l).neg() };
            if spec.contains(&a.mul(m).mul(&ainv)) {
                return Ok(Some((l, s)));
            }
        }
    }
    Ok(None)
}

fn crt(x: i64, n: i64, y: i64, np: i64) -> i64 {
    // z ≡ x (n), z ≡ y (n′)
    let u = inv_mod(n, np).unwrap_or(0);
    (x + n * ((y - x) * u).rem_euclid(np)).rem_euclid(n * np)
}

/// Coset A_M attached to (A, M), or `None` when MA⁻¹ ∉ Γ₁Σₙ. Δₙ and Θₙ use
/// the bottom row of A·M∨; the others fall back to the search.
pub fn resolve_sigma_coset(space: &CosetSpace, label: usize, m: &Mat2, spec: &SigmaSpec) -> Result<Option<Signed>> {
    spec.check(space)?;
    if m.det() != spec.n {
        return Err(Error::Invalid(format!("{m} has determinant {}, expected {}", m.det(), spec.n)));
    }
    let nn = space.level();
    let x = space.lift(label).mul(&m.vee());
    match spec.kind {
        SigmaKind::Delta => {
            if gcd(gcd(x.c, x.d), nn) != 1 {
                return Ok(None);
            }
            Ok(space.lookup_row(x.c, x.d))
        }
        SigmaKind::Theta(_) => {
            let n = spec.n;
            let np = nn / n;
            if x.c % n != 0 || x.d % n != 0 {
                return Ok(None);
            }
            let (cq, dq) = (x.c / n, x.d / n);
            // M_A∨ = (nt −y; −Nz nx): the top row of A·M∨ is ≡ −y(c′, d′) mod n and the
            // bottom row over n is ≡ x(c′, d′) mod n′; for Γ₁, y ≡ 1 and nx ≡ 1
            let (c1, d1) = match space.kind() {
                GroupKind::Gamma0 => (crt(x.a, n, cq, np), crt(x.b, n, dq, np)),
                GroupKind::Gamma1 => (crt(-x.a, n, x.c, np), crt(-x.b, n, x.d, np)),
            };
            if gcd(gcd(c1, d1), nn) != 1 {
                return Ok(None);
            }
            Ok(space.lookup_row(c1, d1))
        }
        SigmaKind::DeltaVee | SigmaKind::Diamond(_) => resolve_by_search(space, label, m, spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(kind: GroupKind, n: i64, k: i64) -> CosetSpace {
        CosetSpace::build(kind, n, k).unwrap()
    }

    fn det_n(n: i64, r: i64) -> Vec<Mat2> {
        let mut out = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    if a != 0 && (n + b * c) % a == 0 {
                        out.push(Mat2::new(a, b, c, (n + b * c) / a));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn remark_examples() {
        let s5 = sp(GroupKind::Gamma0, 5, 4);
        let spec = SigmaSpec::delta(&s5, 2).unwrap();
        let r = resolve_sigma_coset(&s5, 0, &Mat2::new(1, 0, 0, 2), &spec).unwrap();
        assert_eq!(s5.label_name(r.unwrap().0), "(0:1)");
        let s2 = sp(GroupKind::Gamma0, 2, 8);
        let spec = SigmaSpec::delta(&s2, 2).unwrap();
        assert_eq!(resolve_sigma_coset(&s2, 0, &Mat2::new(2, 0, 0, 1), &spec).unwrap(), None);
    }

    #[test]
    fn coprime_delta_always_resolves() {
        let s5 = sp(GroupKind::Gamma0, 5, 4);
        let spec = SigmaSpec::delta(&s5, 2).unwrap();
        for m in det_n(2, 4) {
            for l in 0..s5.index() {
                assert!(resolve_sigma_coset(&s5, l, &m, &spec).unwrap().is_some());
            }
        }
    }

    #[test]
    fn formulas_agree_with_search() {
        let cases: Vec<(CosetSpace, Vec<SigmaSpec>)> = vec![
            {
                let s = sp(GroupKind::Gamma0, 6, 4);
                let v = vec![
                    SigmaSpec::delta(&s, 2).unwrap(),
                    SigmaSpec::delta(&s, 5).unwrap(),
                    SigmaSpec::theta(&s, 2).unwrap(),
                    SigmaSpec::theta(&s, 3).unwrap(),
                    SigmaSpec::theta(&s, 6).unwrap(),
                ];
                (s, v)
            },
            {
                let s = sp(GroupKind::Gamma1, 5, 3);
                let v = vec![SigmaSpec::delta(&s, 2).unwrap(), SigmaSpec::delta(&s, 5).unwrap(), SigmaSpec::theta(&s, 5).unwrap()];
                (s, v)
            },
            {
                let s = sp(GroupKind::Gamma1, 12, 2);
                let v = vec![
                    SigmaSpec::delta(&s, 2).unwrap(),
                    SigmaSpec::theta(&s, 3).unwrap(),
                    SigmaSpec::theta(&s, 4).unwrap(),
                ];
                (s, v)
            },
        ];
        for (s, specs) in &cases {
            for spec in specs {
                for m in det_n(spec.n, 3) {
                    for l in 0..s.index() {
                        let fast = resolve_sigma_coset(s, l, &m, spec).unwrap();
                        let slow = resolve_by_search(s, l, &m, spec).unwrap();
                        assert_eq!(fast, slow, "{:?} label {} M {}", spec.kind, s.label_name(l), m);
                    }
                }
            }
        }
    }

    #[test]
    fn theta_shapes() {
        let s = sp(GroupKind::Gamma1, 12, 2);
        for n in [3, 4] {
            let SigmaKind::Theta(w) = SigmaSpec::theta(&s, n).unwrap().kind else { panic!() };
            assert_eq!(w.det(), n);
            assert!(theta_shape(&w, GroupKind::Gamma1, 12, n));
        }
        assert!(SigmaSpec::theta(&s, 2).is_err());
        assert!(SigmaSpec::delta_vee(&s, 2).is_err());
    }

    #[test]
    fn level_mismatch_is_an_error() {
        let s5 = sp(GroupKind::Gamma0, 5, 4);
        let s7 = sp(GroupKind::Gamma0, 7, 4);
        let spec = SigmaSpec::delta(&s5, 2).unwrap();
        assert!(resolve_sigma_coset(&s7, 0, &Mat2::new(1, 0, 0, 2), &spec).is_err());
    }
}
