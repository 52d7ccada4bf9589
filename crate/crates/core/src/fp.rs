//! Arithmetic and dense linear algebra over a prime field `F_p`.
//!
//! Everything here is exact: elements are canonical residues in `0..p`,
//! products go through `u128`, and rank computation is plain Gaussian
//! elimination with inverse pivots. Matrices in this crate stay tiny
//! (interpolation systems for plane curves of degree <= 9), so no effort
//! is spent on blocking or sparsity.

/// A prime modulus together with the arithmetic helpers bound to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds the field, checking primality of `p`.
    pub fn new(p: u64) -> Option<Self> {
        if is_prime(p) {
            Some(PrimeField { p })
        } else {
            None
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element (Fermat).
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }
}

/// Deterministic Miller-Rabin, valid for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    // This witness set is deterministic for n < 2^64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Row-major dense matrix over `F_p`.
#[derive(Debug, Clone)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.field.p;
    }

    /// Rank by in-place Gaussian elimination (the matrix is consumed).
    pub fn rank(mut self) -> usize {
        let f = self.field;
        let mut rank = 0usize;
        let mut col = 0usize;
        while rank < self.rows && col < self.cols {
            let pivot = (rank..self.rows).find(|&r| self.get(r, col) != 0);
            let Some(pr) = pivot else {
                col += 1;
                continue;
            };
            if pr != rank {
                for c in col..self.cols {
                    self.data.swap(pr * self.cols + c, rank * self.cols + c);
                }
            }
            let inv = f.inv(self.get(rank, col));
            for r in (rank + 1)..self.rows {
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                let scale = f.mul(factor, inv);
                for c in col..self.cols {
                    let sub = f.mul(scale, self.get(rank, c));
                    let v = f.sub(self.get(r, c), sub);
                    self.set(r, c, v);
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Dimension of the right kernel.
    pub fn nullity(self) -> usize {
        let cols = self.cols;
        cols - self.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(2_147_483_647).unwrap()
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(2_147_483_647));
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1));
        assert!(!is_prime(1_000_005));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn field_ops() {
        let f = f();
        let a = 123_456_789u64;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        assert_eq!(f.reduce_i64(-1), f.modulus() - 1);
        assert_eq!(f.sub(0, 1), f.modulus() - 1);
    }

    #[test]
    fn rank_of_identity_and_singular() {
        let f = f();
        let mut m = FpMatrix::zeros(f, 3, 3);
        for i in 0..3 {
            m.set(i, i, 1);
        }
        assert_eq!(m.rank(), 3);

        // rows 0 and 2 proportional
        let mut s = FpMatrix::zeros(f, 3, 3);
        s.set(0, 0, 1);
        s.set(0, 1, 2);
        s.set(0, 2, 3);
        s.set(1, 0, 4);
        s.set(1, 1, 5);
        s.set(1, 2, 6);
        s.set(2, 0, 2);
        s.set(2, 1, 4);
        s.set(2, 2, 6);
        assert_eq!(s.clone().rank(), 2);
        assert_eq!(s.nullity(), 1);
    }

    #[test]
    fn nullity_of_wide_matrix() {
        let f = f();
        let mut m = FpMatrix::zeros(f, 2, 5);
        m.set(0, 0, 1);
        m.set(1, 3, 7);
        assert_eq!(m.nullity(), 3);
    }
}
