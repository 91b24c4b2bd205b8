use hermlat::linalg::Matrix;
use hermlat::{KElem, KRational, Ring};
use rand::seq::SliceRandom;
use rand::Rng;

pub const DISCS: [i64; 5] = [-3, -4, -7, -8, -11];

/// `a + b*theta` with `|a|, |b| <= bound`.
pub fn elem(ring: Ring, bound: i64, rng: &mut impl Rng) -> KElem {
    ring.from_basis_coords(rng.gen_range(-bound..=bound).into(), rng.gen_range(-bound..=bound).into())
}

pub fn nonzero_elem(ring: Ring, bound: i64, rng: &mut impl Rng) -> KElem {
    loop {
        let x = elem(ring, bound, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Nonsingular integral hermitian matrix with bounded entries.
pub fn hermitian(ring: Ring, n: usize, bound: i64, rng: &mut impl Rng) -> Matrix {
    loop {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, KRational::from_int(ring, rng.gen_range(-bound..=bound)));
            for j in i + 1..n {
                let x = KRational::from(elem(ring, bound / 2 + 1, rng));
                m.set(j, i, x.conj());
                m.set(i, j, x);
            }
        }
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

/// Positive definite integral hermitian matrix.
pub fn definite(ring: Ring, n: usize, bound: i64, rng: &mut impl Rng) -> Matrix {
    loop {
        let m = hermitian(ring, n, bound, rng);
        if m.signature().unwrap() == (n, 0) {
            return m;
        }
    }
}

/// Product of random elementary operations and unit scalings.
pub fn unimodular(ring: Ring, n: usize, rng: &mut impl Rng) -> Matrix {
    let mut m = Matrix::identity(ring, n);
    let units = ring.units();
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            let u = KRational::from(units.choose(rng).unwrap().clone());
            for r in 0..n {
                let x = m.get(r, i) * &u;
                m.set(r, i, x);
            }
        } else {
            let c = KRational::from(elem(ring, 2, rng));
            for r in 0..n {
                let x = m.get(r, i) + &(m.get(r, j) * &c);
                m.set(r, i, x);
            }
        }
    }
    m
}

/// Nonsingular integral matrix.
pub fn nonsingular(ring: Ring, n: usize, bound: i64, rng: &mut impl Rng) -> Matrix {
    loop {
        let m = Matrix::from_fn(ring, n, n, |_, _| KRational::from(elem(ring, bound, rng)));
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}
