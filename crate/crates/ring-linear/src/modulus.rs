use crate::LinearError;
use std::fmt;

/// A prime power modulus `m = p^k` with `m < 2^31`.
///
/// All scalar arithmetic in the crate is carried out modulo `m`, with values
/// stored reduced to `[0, m)`. The p-adic valuation of scalars drives pivot
/// selection in the Howell form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u32,
    k: u32,
    m: u32,
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.k)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "Z/{}", self.p)
        } else {
            write!(f, "Z/{}^{}", self.p, self.k)
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Modulus {
    pub fn new(p: u32, k: u32) -> Result<Self, LinearError> {
        if !is_prime(p) {
            return Err(LinearError::BadModulus {
                p,
                k,
                reason: "p is not prime".into(),
            });
        }
        if k == 0 {
            return Err(LinearError::BadModulus {
                p,
                k,
                reason: "exponent must be positive".into(),
            });
        }
        let mut m: u64 = 1;
        for _ in 0..k {
            m *= p as u64;
            if m >= (1 << 31) {
                return Err(LinearError::BadModulus {
                    p,
                    k,
                    reason: "p^k does not fit in a machine word".into(),
                });
            }
        }
        Ok(Modulus { p, k, m: m as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Reduce an arbitrary signed integer into `[0, m)`.
    pub fn reduce(&self, x: i64) -> u32 {
        let m = self.m as i64;
        (((x % m) + m) % m) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.m as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let m = self.m as u64;
        ((a as u64 + m - b as u64 % m) % m) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.m - a % self.m
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.m as u64) as u32
    }

    /// p-adic valuation of `x` in `[0, m)`, with `val(0) = k`.
    pub fn val(&self, x: u32) -> u32 {
        if x == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut x = x;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// `p^v`, for `v <= k`.
    pub fn pow_p(&self, v: u32) -> u32 {
        let mut r: u32 = 1;
        for _ in 0..v {
            r *= self.p;
        }
        r
    }

    pub fn is_unit(&self, x: u32) -> bool {
        !(x % self.m).is_multiple_of(self.p)
    }

    /// Inverse of a unit mod `p^k` (extended Euclid).
    pub fn unit_inv(&self, x: u32) -> u32 {
        let x = x % self.m;
        debug_assert!(!x.is_multiple_of(self.p), "not a unit: {x} mod {}", self.m);
        let (mut t, mut new_t): (i64, i64) = (0, 1);
        let (mut r, mut new_r): (i64, i64) = (self.m as i64, x as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        self.reduce(t)
    }
}
