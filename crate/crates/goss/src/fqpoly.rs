//! Dense univariate polynomials over an interned finite field.
//!
//! Coefficients are stored little-endian with no trailing zeros; the zero
//! polynomial has an empty coefficient vector. Products of large polynomials
//! over a prime field go through Kronecker substitution into `BigUint`
//! multiplication, which is what makes the exact special-polynomial blocks
//! affordable.

use crate::field::{Code, FieldId};
#[cfg(test)]
use crate::field::field;
use num_bigint::BigUint;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    pub f: FieldId,
    pub c: Vec<Code>,
}

impl std::fmt::Debug for FqPoly {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fmt, "FqPoly{:?}", self.c)
    }
}

const KRONECKER_MIN: usize = 48;

impl FqPoly {
    pub fn new(f: FieldId, mut c: Vec<Code>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        FqPoly { f, c }
    }

    pub fn zero(f: FieldId) -> Self {
        FqPoly { f, c: Vec::new() }
    }

    pub fn one(f: FieldId) -> Self {
        FqPoly { f, c: vec![1] }
    }

    pub fn constant(f: FieldId, a: Code) -> Self {
        Self::new(f, vec![a])
    }

    /// The monomial `a * x^d`.
    pub fn monomial(f: FieldId, a: Code, d: usize) -> Self {
        if a == 0 {
            return Self::zero(f);
        }
        let mut c = vec![0; d + 1];
        c[d] = a;
        FqPoly { f, c }
    }

    pub fn x(f: FieldId) -> Self {
        Self::monomial(f, 1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn leading(&self) -> Code {
        *self.c.last().expect("leading coefficient of zero")
    }

    pub fn coeff(&self, i: usize) -> Code {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.f, o.f);
        let fd = self.f.rf();
        let mut c = vec![0; self.c.len().max(o.c.len())];
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = fd.add(self.coeff(i), o.coeff(i));
        }
        Self::new(self.f, c)
    }

    pub fn neg(&self) -> Self {
        let fd = self.f.rf();
        Self {
            f: self.f,
            c: self.c.iter().map(|&a| fd.neg(a)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Code) -> Self {
        if a == 0 {
            return Self::zero(self.f);
        }
        let fd = self.f.rf();
        Self {
            f: self.f,
            c: self.c.iter().map(|&b| fd.mul(a, b)).collect(),
        }
    }

    /// Multiply by `x^d`.
    pub fn shift(&self, d: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; d];
        c.extend_from_slice(&self.c);
        Self { f: self.f, c }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.f, o.f);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.f);
        }
        let fd = self.f.rf();
        let small = self.c.len().min(o.c.len());
        if fd.k == 1 && small >= KRONECKER_MIN {
            return self.mul_kronecker(o);
        }
        let mut c = vec![0 as Code; self.c.len() + o.c.len() - 1];
        if fd.k == 1 {
            // accumulate in u32 with periodic reduction
            let p = fd.p;
            let mut acc = vec![0u64; c.len()];
            for (i, &ai) in self.c.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in o.c.iter().enumerate() {
                    acc[i + j] += (ai as u64) * (bj as u64);
                }
            }
            for (i, slot) in c.iter_mut().enumerate() {
                *slot = (acc[i] % p as u64) as Code;
            }
        } else {
            for (i, &ai) in self.c.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in o.c.iter().enumerate() {
                    c[i + j] = fd.add(c[i + j], fd.mul(ai, bj));
                }
            }
        }
        Self::new(self.f, c)
    }

    /// Kronecker substitution: pack coefficients into a big integer at a
    /// byte-aligned stride wide enough that convolution sums cannot collide,
    /// multiply, unpack mod p.
    fn mul_kronecker(&self, o: &Self) -> Self {
        let fd = self.f.rf();
        let p = fd.p as u64;
        let small = self.c.len().min(o.c.len()) as u64;
        let maxval = (p - 1) * (p - 1) * small;
        let bits = 64 - maxval.leading_zeros() as usize;
        let bytes = bits.div_ceil(8);
        let pack = |poly: &FqPoly| {
            let mut buf = vec![0u8; poly.c.len() * bytes];
            for (i, &a) in poly.c.iter().enumerate() {
                buf[i * bytes] = a as u8; // p - 1 < 256 for our fields
                if p > 256 {
                    unreachable!("prime too large for packing");
                }
            }
            BigUint::from_bytes_le(&buf)
        };
        let prod = pack(self) * pack(o);
        let buf = prod.to_bytes_le();
        let n = self.c.len() + o.c.len() - 1;
        let mut c = vec![0 as Code; n];
        for (i, slot) in c.iter_mut().enumerate() {
            let mut v = 0u64;
            for b in (0..bytes).rev() {
                let idx = i * bytes + b;
                if idx < buf.len() {
                    v = (v << 8) | buf[idx] as u64;
                }
            }
            *slot = (v % p) as Code;
        }
        Self::new(self.f, c)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `f(x)^q = f(x^q)` for coefficients in `F_q`: pure exponent spread.
    pub fn pow_q_spread(&self) -> Self {
        let q = self.f.rf().q as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; (self.c.len() - 1) * q + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[i * q] = a;
        }
        Self { f: self.f, c }
    }

    pub fn eval(&self, x: Code) -> Code {
        let fd = self.f.rf();
        let mut acc = 0;
        for &a in self.c.iter().rev() {
            acc = fd.add(fd.mul(acc, x), a);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let fd = self.f.rf();
        let mut c = Vec::with_capacity(self.c.len().saturating_sub(1));
        for (i, &a) in self.c.iter().enumerate().skip(1) {
            c.push(fd.mul(a, fd.from_int(i as i64)));
        }
        Self::new(self.f, c)
    }

    /// Quotient and remainder; divisor may have any invertible leading
    /// coefficient.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let fd = self.f.rf();
        if self.degree() < d.degree() {
            return (Self::zero(self.f), self.clone());
        }
        let linv = fd.inv(d.leading());
        let mut rem = self.c.clone();
        let dn = d.c.len();
        let mut quo = vec![0 as Code; rem.len() - dn + 1];
        for top in (dn - 1..rem.len()).rev() {
            let c = fd.mul(rem[top], linv);
            if c == 0 {
                continue;
            }
            quo[top + 1 - dn] = c;
            for (j, &dj) in d.c.iter().enumerate() {
                let idx = top + 1 - dn + j;
                rem[idx] = fd.sub(rem[idx], fd.mul(c, dj));
            }
        }
        (Self::new(self.f, quo), Self::new(self.f, rem))
    }

    /// Exact division; panics if not divisible (callers check first when
    /// divisibility is data-dependent).
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.fast_div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Division via reversed-Newton series inversion when sizes are large;
    /// falls back to schoolbook otherwise.
    pub fn fast_div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        if self.degree() < d.degree() {
            return (Self::zero(self.f), self.clone());
        }
        let qdeg = (self.degree() - d.degree()) as usize;
        if self.f.rf().k != 1 || qdeg < 2 * KRONECKER_MIN || d.c.len() < KRONECKER_MIN {
            return self.div_rem(d);
        }
        let rev = |p: &FqPoly, n: usize| {
            let mut c: Vec<Code> = p.c.iter().rev().copied().collect();
            c.resize(n, 0);
            FqPoly::new(p.f, c)
        };
        let ra = rev(self, self.c.len());
        let rd = rev(d, d.c.len());
        let inv = rd.series_inverse(qdeg + 1);
        let rq = ra.mul(&inv).truncate_len(qdeg + 1);
        let mut qc: Vec<Code> = rq.c.clone();
        qc.resize(qdeg + 1, 0);
        qc.reverse();
        let q = FqPoly::new(self.f, qc);
        let r = self.sub(&q.mul(d));
        (q, r)
    }

    fn truncate_len(&self, n: usize) -> Self {
        Self::new(self.f, self.c.iter().take(n).copied().collect())
    }

    /// Inverse of a unit-constant-term series mod x^n by Newton doubling.
    fn series_inverse(&self, n: usize) -> Self {
        let fd = self.f.rf();
        assert!(self.coeff(0) != 0, "series inverse needs a unit constant");
        let mut inv = Self::constant(self.f, fd.inv(self.coeff(0)));
        let mut prec = 1;
        let two = Self::constant(self.f, fd.from_int(2));
        while prec < n {
            prec = (2 * prec).min(n);
            let t = self.truncate_len(prec).mul(&inv).truncate_len(prec);
            inv = inv.mul(&two.sub(&t)).truncate_len(prec);
        }
        inv
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let fd = self.f.rf();
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.fast_div_rem(&b);
            a = b;
            b = r;
        }
        if !a.is_zero() {
            let s = fd.inv(a.leading());
            a = a.scale(s);
        }
        a
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.f);
        }
        let g = self.gcd(o);
        let m = self.mul(&o.div_exact(&g));
        let s = m.f.rf().inv(m.leading());
        m.scale(s)
    }

    pub fn divides(&self, o: &Self) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        o.fast_div_rem(self).1.is_zero()
    }

    /// Monic irreducibility by trial division over the base field; fine at
    /// the degrees this crate needs.
    pub fn is_irreducible(&self) -> bool {
        let d = self.degree();
        if d < 1 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let fd = self.f.rf();
        for deg in 1..=(d as usize / 2) {
            for code in 0..(fd.q as u64).pow(deg as u32) {
                let mut c = vec![0 as Code; deg + 1];
                c[deg] = 1;
                let mut t = code;
                for slot in c.iter_mut().take(deg) {
                    *slot = (t % fd.q as u64) as Code;
                    t /= fd.q as u64;
                }
                let cand = FqPoly::new(self.f, c);
                if cand.divides(self) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, f: FieldId, maxlen: usize) -> FqPoly {
        let q = f.rf().q;
        let len = rng.gen_range(0..maxlen);
        FqPoly::new(f, (0..len).map(|_| rng.gen_range(0..q) as Code).collect())
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let f3 = field(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b726f6e);
        for _ in 0..30 {
            let a = random_poly(&mut rng, f3, 400);
            let b = random_poly(&mut rng, f3, 400);
            let fast = a.mul(&b);
            // force schoolbook via the generic path on a non-prime field clone
            let mut slow = vec![0 as Code; (a.c.len() + b.c.len()).max(1)];
            for (i, &ai) in a.c.iter().enumerate() {
                for (j, &bj) in b.c.iter().enumerate() {
                    slow[i + j] = ((slow[i + j] as u32 + ai as u32 * bj as u32) % 3) as Code;
                }
            }
            assert_eq!(fast, FqPoly::new(f3, slow));
        }
    }

    #[test]
    fn div_rem_roundtrip() {
        let f3 = field(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1f7);
        for _ in 0..200 {
            let a = random_poly(&mut rng, f3, 300);
            let mut b = random_poly(&mut rng, f3, 60);
            if b.is_zero() {
                b = FqPoly::one(f3);
            }
            let (q, r) = a.fast_div_rem(&b);
            assert!(r.degree() < b.degree());
            assert_eq!(q.mul(&b).add(&r), a);
        }
    }

    #[test]
    fn gcd_lcm_product() {
        let f3 = field(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0x9cd);
        for _ in 0..100 {
            let a = random_poly(&mut rng, f3, 40);
            let b = random_poly(&mut rng, f3, 40);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let g = a.gcd(&b);
            assert!(g.divides(&a) && g.divides(&b));
            let l = a.lcm(&b);
            assert!(a.divides(&l) && b.divides(&l));
            assert_eq!(g.mul(&l).degree(), a.degree() + b.degree());
        }
    }

    #[test]
    fn q_spread_is_qth_power() {
        let f9 = field(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let a = random_poly(&mut rng, f9, 12);
            assert_eq!(a.pow(9), a.pow_q_spread());
        }
    }

    #[test]
    fn irreducibility_small() {
        let f3 = field(3, 1);
        // t^2 + 1 is irreducible over F_3; t^2 + 2 = (t-1)(t+1) is not
        assert!(FqPoly::new(f3, vec![1, 0, 1]).is_irreducible());
        assert!(!FqPoly::new(f3, vec![2, 0, 1]).is_irreducible());
    }
}
