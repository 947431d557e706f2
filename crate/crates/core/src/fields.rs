//! Arithmetic tables for the small finite fields the constructors need:
//! every prime below 1000 plus GF(4), GF(8), GF(9), GF(16), GF(25), GF(27)
//! via fixed irreducible polynomials.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error(
    "no arithmetic table for field order {0} (primes < 1000 and 4, 8, 9, 16, 25, 27 are supported)"
)]
pub struct UnsupportedFieldOrder(pub usize);

/// Reduction rules `x^d = r(x)` for the supported prime powers, as
/// `(q, p, d, coefficients of r ascending)`.
const PRIME_POWERS: &[(usize, usize, usize, &[usize])] = &[
    (4, 2, 2, &[1, 1]),        // x^2 = x + 1
    (8, 2, 3, &[1, 1, 0]),     // x^3 = x + 1
    (9, 3, 2, &[2, 0]),        // x^2 = 2
    (16, 2, 4, &[1, 1, 0, 0]), // x^4 = x + 1
    (25, 5, 2, &[3, 0]),       // x^2 = 3
    (27, 3, 3, &[2, 1, 0]),    // x^3 = x + 2
];

/// A finite field on elements `0..q`, with full addition and multiplication
/// tables. For prime powers, element `i` encodes the polynomial with base-p
/// digits of `i` as coefficients.
#[derive(Debug, Clone)]
pub struct GaloisField {
    q: usize,
    p: usize,
    add_table: Vec<u16>,
    mul_table: Vec<u16>,
    inv_table: Vec<u16>,
}

impl GaloisField {
    pub fn new(q: usize) -> Result<GaloisField, UnsupportedFieldOrder> {
        if q < 1000 && crate::thin::is_prime(q) {
            return Ok(Self::from_tables(
                q,
                q,
                |a, b| (a + b) % q,
                |a, b| a * b % q,
            ));
        }
        if let Some(&(_, p, d, reduction)) = PRIME_POWERS.iter().find(|&&(qq, ..)| qq == q) {
            let add = |a: usize, b: usize| {
                let (da, db) = (digits(a, p, d), digits(b, p, d));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                undigits(&sum, p)
            };
            let mul = |a: usize, b: usize| {
                let (da, db) = (digits(a, p, d), digits(b, p, d));
                // Schoolbook product, then fold degrees >= d down with the
                // reduction rule until the result fits.
                let mut prod = vec![0usize; 2 * d - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (d..prod.len()).rev() {
                    let coeff = prod[deg];
                    if coeff != 0 {
                        prod[deg] = 0;
                        for (k, &r) in reduction.iter().enumerate() {
                            prod[deg - d + k] = (prod[deg - d + k] + coeff * r) % p;
                        }
                    }
                }
                undigits(&prod[..d], p)
            };
            return Ok(Self::from_tables(q, p, add, mul));
        }
        Err(UnsupportedFieldOrder(q))
    }

    fn from_tables(
        q: usize,
        p: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> GaloisField {
        let mut add_table = vec![0u16; q * q];
        let mut mul_table = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add_table[a * q + b] = add(a, b) as u16;
                mul_table[a * q + b] = mul(a, b) as u16;
            }
        }
        let mut inv_table = vec![0u16; q];
        for a in 1..q {
            let inv = (1..q)
                .find(|&b| mul_table[a * q + b] == 1)
                .expect("every nonzero element is invertible");
            inv_table[a] = inv as u16;
        }
        GaloisField {
            q,
            p,
            add_table,
            mul_table,
            inv_table,
        }
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add_table[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.q + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q)
            .find(|&b| self.add(a, b) == 0)
            .expect("every element has a negative")
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: usize) -> usize {
        assert!(a != 0, "zero has no inverse");
        self.inv_table[a] as usize
    }

    /// A generator of the cyclic multiplicative group, found by scanning.
    pub fn primitive_element(&self) -> usize {
        'outer: for g in 1..self.q {
            let mut acc = g;
            for _ in 1..self.q - 1 {
                if acc == 1 {
                    continue 'outer;
                }
                acc = self.mul(acc, g);
            }
            if acc == 1 {
                return g;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }
}

fn digits(mut a: usize, p: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    for slot in out.iter_mut() {
        *slot = a % p;
        a /= p;
    }
    out
}

fn undigits(digits: &[usize], p: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &x| acc * p + x)
}
