//! Dense 2x2 complex matrices in the {H, V} basis.
//!
//! Used both for Jones elements (one photon) and for the two-photon
//! polarization amplitude `A[p][q]` (first index: photon at `w0 + W`,
//! second index: photon at `w0 - W`).

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::scalar::{czero, Cplx, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T: Real> {
    pub e: [[Cplx<T>; 2]; 2],
}

impl<T: Real> Mat2<T> {
    pub fn new(e: [[Cplx<T>; 2]; 2]) -> Self {
        Self { e }
    }

    pub fn from_real(e: [[T; 2]; 2]) -> Self {
        Self::new([
            [
                Complex::new(e[0][0], T::zero()),
                Complex::new(e[0][1], T::zero()),
            ],
            [
                Complex::new(e[1][0], T::zero()),
                Complex::new(e[1][1], T::zero()),
            ],
        ])
    }

    pub fn zero() -> Self {
        Self::new([[czero(); 2]; 2])
    }

    pub fn identity() -> Self {
        Self::from_real([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    pub fn transpose(&self) -> Self {
        let e = &self.e;
        Self::new([[e[0][0], e[1][0]], [e[0][1], e[1][1]]])
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.e;
        Self::new([
            [e[0][0].conj(), e[1][0].conj()],
            [e[0][1].conj(), e[1][1].conj()],
        ])
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        let mut out = *self;
        out.e.iter_mut().flatten().for_each(|z| *z = *z * s);
        out
    }

    pub fn det(&self) -> Cplx<T> {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    /// Squared Frobenius norm, `sum |m_pq|^2`.
    pub fn norm_sqr(&self) -> T {
        self.e
            .iter()
            .flatten()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.e
            .iter()
            .flatten()
            .zip(other.e.iter().flatten())
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    /// Bilinear form `left^T M right` for real analyzer vectors.
    pub fn bilinear(&self, left: [T; 2], right: [T; 2]) -> Cplx<T> {
        let mut acc = czero();
        for (p, &l) in left.iter().enumerate() {
            for (q, &r) in right.iter().enumerate() {
                acc = acc + self.e[p][q] * (l * r);
            }
        }
        acc
    }

    /// `a (1 - t) + b t`, entrywise.
    pub fn lerp(a: &Self, b: &Self, t: T) -> Self {
        let mut out = *a;
        for p in 0..2 {
            for q in 0..2 {
                out.e[p][q] = a.e[p][q] * (T::one() - t) + b.e[p][q] * t;
            }
        }
        out
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.e, &rhs.e);
        Self::new([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (z, w) in self.e.iter_mut().flatten().zip(rhs.e.iter().flatten()) {
            *z = *z + *w;
        }
        self
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (z, w) in self.e.iter_mut().flatten().zip(rhs.e.iter().flatten()) {
            *z = *z - *w;
        }
        self
    }
}
