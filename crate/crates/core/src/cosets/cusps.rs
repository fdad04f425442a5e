use super::{CosetSpace, Mat2};

/// One cusp: a T-orbit of cosets (modulo ±).
#[derive(Clone, Debug, PartialEq)]
pub struct CuspClass {
    pub labels: Vec<usize>,
    pub representative: usize,
    pub width: usize,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CuspSet {
    pub classes: Vec<CuspClass>,
}

impl CuspSet {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn regular_count(&self) -> usize {
        self.classes.iter().filter(|c| c.regular).count()
    }

    /// Index of the class containing `label`.
    pub fn class_of(&self, label: usize) -> usize {
        self.classes.iter().position(|c| c.labels.contains(&label)).expect("classes partition the labels")
    }
}

/// Cusps as T-orbits on labels. When −1 ∉ Γ a cusp is regular iff walking
/// along T returns to the starting coset with sign +; when −1 ∈ Γ every cusp
/// is regular.
pub fn cusp_classes(space: &CosetSpace) -> CuspSet {
    let n = space.index();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut labels = vec![start];
        seen[start] = true;
        let mut cur = (start, 1i8);
        let back_sign = loop {
            cur = space.act_signed(cur, &Mat2::T).expect("T is unimodular");
            if cur.0 == start {
                break cur.1;
            }
            seen[cur.0] = true;
            labels.push(cur.0);
        };
        let width = labels.len();
        labels.sort_unstable();
        let regular = space.contains_minus_one() || back_sign == 1;
        classes.push(CuspClass { representative: start, labels, width, regular });
    }
    CuspSet { classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::GroupKind;
    use crate::exactalg::{euler_phi, gcd};

    fn classical_gamma0_cusps(n: i64) -> usize {
        (1..=n).filter(|d| n % d == 0).map(|d| euler_phi(gcd(d, n / d) as u64) as usize).sum()
    }

    #[test]
    fn gamma0_cusp_counts() {
        for n in 1..=30 {
            let sp = CosetSpace::build(GroupKind::Gamma0, n, 2).unwrap();
            let cs = cusp_classes(&sp);
            assert_eq!(cs.count(), classical_gamma0_cusps(n), "N={n}");
            assert_eq!(cs.classes.iter().map(|c| c.width).sum::<usize>(), sp.index());
        }
    }

    #[test]
    fn gamma1_regularity() {
        let cs = cusp_classes(&CosetSpace::build(GroupKind::Gamma1, 4, 3).unwrap());
        assert_eq!((cs.count(), cs.regular_count()), (3, 2));
        let cs = cusp_classes(&CosetSpace::build(GroupKind::Gamma1, 3, 3).unwrap());
        assert_eq!((cs.count(), cs.regular_count()), (2, 2));
        for n in 5..=20i64 {
            let cs = cusp_classes(&CosetSpace::build(GroupKind::Gamma1, n, 3).unwrap());
            let expect: u64 = (1..=n as u64).filter(|d| n as u64 % d == 0).map(|d| euler_phi(d) * euler_phi(n as u64 / d)).sum::<u64>() / 2;
            assert_eq!(cs.count() as u64, expect, "N={n}");
            assert_eq!(cs.regular_count(), cs.count());
        }
    }

    #[test]
    fn gamma0_2_cusps_are_i_and_s() {
        let sp = CosetSpace::build(GroupKind::Gamma0, 2, 8).unwrap();
        let cs = cusp_classes(&sp);
        assert_eq!(cs.count(), 2);
        let i = sp.label_of(&Mat2::IDENTITY).unwrap().0;
        let s = sp.label_of(&Mat2::S).unwrap().0;
        assert_ne!(cs.class_of(i), cs.class_of(s));
    }
}
