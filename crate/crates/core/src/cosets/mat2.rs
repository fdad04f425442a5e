use serde::{Deserialize, Serialize};
use std::fmt;

/// Integer 2×2 matrix `(a b; c d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Mat2 {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const IDENTITY: Mat2 = Mat2::new(1, 0, 0, 1);
    pub const S: Mat2 = Mat2::new(0, -1, 1, 0);
    pub const T: Mat2 = Mat2::new(1, 1, 0, 1);
    pub const T_INV: Mat2 = Mat2::new(1, -1, 0, 1);
    /// U = TS.
    pub const U: Mat2 = Mat2::new(1, -1, 1, 0);
    pub const U2: Mat2 = Mat2::new(0, -1, 1, -1);
    pub const J: Mat2 = Mat2::new(-1, 0, 0, -1);
    pub const EPS: Mat2 = Mat2::new(-1, 0, 0, 1);

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// The adjoint `g∨ = det(g)·g⁻¹ = (d −b; −c a)`.
    pub fn vee(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    /// Inverse of a determinant ±1 matrix.
    pub fn inverse(&self) -> Option<Mat2> {
        match self.det() {
            1 => Some(self.vee()),
            -1 => Some(self.vee().neg()),
            _ => None,
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn pow(&self, n: i64) -> Mat2 {
        let base = if n < 0 { self.inverse().expect("negative power of a non-unimodular matrix") } else { *self };
        let mut out = Mat2::IDENTITY;
        for _ in 0..n.abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Representative of {±g} whose first nonzero entry among (c, d, a, b) is positive.
    pub fn canonical(&self) -> Mat2 {
        let lead = [self.c, self.d, self.a, self.b].into_iter().find(|x| *x != 0).unwrap_or(0);
        if lead < 0 {
            self.neg()
        } else {
            *self
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// ε g ε.
    pub fn eps_conj(&self) -> Mat2 {
        Mat2::new(self.a, -self.b, -self.c, self.d)
    }

    /// Product of a word in S and T (`'S'`, `'T'`, `'t'` for T⁻¹).
    pub fn word(w: &str) -> Mat2 {
        w.chars().fold(Mat2::IDENTITY, |acc, ch| {
            acc.mul(match ch {
                'S' => &Mat2::S,
                'T' => &Mat2::T,
                't' => &Mat2::T_INV,
                'U' => &Mat2::U,
                _ => panic!("unknown generator {ch}"),
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_relations() {
        assert_eq!(Mat2::T.mul(&Mat2::S), Mat2::U);
        assert_eq!(Mat2::U.mul(&Mat2::U), Mat2::U2);
        assert_eq!(Mat2::U.pow(3), Mat2::J);
        assert_eq!(Mat2::S.pow(2), Mat2::J);
        assert_eq!(Mat2::T.vee(), Mat2::T_INV);
        assert_eq!(Mat2::EPS.mul(&Mat2::new(1, 2, 3, 7)).mul(&Mat2::EPS), Mat2::new(1, 2, 3, 7).eps_conj());
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(Mat2::new(1, 0, -2, -1).canonical(), Mat2::new(-1, 0, 2, 1));
        assert_eq!(Mat2::new(-2, 3, 0, 0).canonical(), Mat2::new(2, -3, 0, 0));
        assert_eq!(Mat2::J.canonical(), Mat2::IDENTITY);
    }
}
