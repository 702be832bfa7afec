//! Twisted polynomials in the q-power Frobenius, over a pluggable
//! coefficient domain: exact fractions for algebraic identities, truncated
//! Laurent elements for evaluation. Multiplication follows `tau c = c^q tau`.

/// Coefficient operations a twisted-polynomial ring needs. `tw_frob_q` is
/// `c -> c^q` for the base-field size `q` of the attached ring.
pub trait TwistCoeff: Clone {
    fn tw_add(&self, o: &Self) -> Self;
    fn tw_mul(&self, o: &Self) -> Self;
    fn tw_neg(&self) -> Self;
    fn tw_is_zero(&self) -> bool;
    fn tw_frob_q(&self) -> Self;

    fn tw_sub(&self, o: &Self) -> Self {
        self.tw_add(&o.tw_neg())
    }

    fn tw_frob_q_iter(&self, n: u32) -> Self {
        let mut x = self.clone();
        for _ in 0..n {
            x = x.tw_frob_q();
        }
        x
    }
}

impl TwistCoeff for crate::rings::FractionElem {
    fn tw_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn tw_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn tw_neg(&self) -> Self {
        self.neg()
    }
    fn tw_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn tw_frob_q(&self) -> Self {
        self.pow_q()
    }
}

impl TwistCoeff for crate::laurent::LaurentElem {
    fn tw_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn tw_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn tw_neg(&self) -> Self {
        self.neg()
    }
    fn tw_is_zero(&self) -> bool {
        self.is_zero_to_prec()
    }
    fn tw_frob_q(&self) -> Self {
        self.pow_qpow(1)
    }
}

/// `sum c_i tau^i`; trailing zero coefficients are trimmed.
#[derive(Clone, Debug)]
pub struct TwistedPoly<C: TwistCoeff> {
    pub c: Vec<C>,
}

impl<C: TwistCoeff> TwistedPoly<C> {
    pub fn new(mut c: Vec<C>) -> Self {
        while c.last().map(|x| x.tw_is_zero()).unwrap_or(false) {
            c.pop();
        }
        TwistedPoly { c }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree in tau; -1 for zero.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> Option<&C> {
        self.c.get(i)
    }

    pub fn constant_term(&self) -> Option<&C> {
        self.c.first()
    }

    pub fn top(&self) -> Option<&C> {
        self.c.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let v = match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.tw_add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            c.push(v);
        }
        Self::new(c)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.c.iter().map(|a| a.tw_neg()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Left multiplication by a plain coefficient.
    pub fn scale(&self, a: &C) -> Self {
        Self::new(self.c.iter().map(|b| a.tw_mul(b)).collect())
    }

    /// Noncommutative product: `tau^i c = c^(q^i) tau^i`.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out: Vec<Option<C>> = vec![None; self.c.len() + o.c.len() - 1];
        let mut frobbed = o.c.clone();
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                for b in frobbed.iter_mut() {
                    *b = b.tw_frob_q();
                }
            }
            if a.tw_is_zero() {
                continue;
            }
            for (j, b) in frobbed.iter().enumerate() {
                let term = a.tw_mul(b);
                out[i + j] = Some(match out[i + j].take() {
                    Some(x) => x.tw_add(&term),
                    None => term,
                });
            }
        }
        Self::new(out.into_iter().flatten().collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc: Option<Self> = None;
        for _ in 0..e {
            acc = Some(match acc {
                Some(x) => x.mul(self),
                None => self.clone(),
            });
        }
        acc.expect("zeroth twisted power needs a ring context")
    }

    /// `sum c_i x^(q^i)` as the induced additive map; `None` when every
    /// term vanished (the zero map).
    pub fn eval(&self, x: &C) -> Option<C> {
        let mut xq = x.clone();
        let mut acc: Option<C> = None;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                xq = xq.tw_frob_q();
            }
            if c.tw_is_zero() {
                continue;
            }
            let term = c.tw_mul(&xq);
            acc = Some(match acc {
                Some(a) => a.tw_add(&term),
                None => term,
            });
        }
        acc
    }

    pub fn map<D: TwistCoeff>(&self, f: impl Fn(&C) -> D) -> TwistedPoly<D> {
        TwistedPoly::new(self.c.iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{random_elem, FractionElem, RingId};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_twisted(rng: &mut ChaCha8Rng, ring: RingId, deg: usize) -> TwistedPoly<FractionElem> {
        let c = (0..=rng.gen_range(0..=deg))
            .map(|_| FractionElem::from_ring(random_elem(rng, ring, 3)))
            .collect();
        TwistedPoly::new(c)
    }

    #[test]
    fn commutation_rule() {
        // (tau * c)(x) = c^q x^q
        let mut rng = ChaCha8Rng::seed_from_u64(0x7a0);
        for ring in [RingId::a0_f3(), RingId::A1] {
            for _ in 0..50 {
                let c = FractionElem::from_ring(random_elem(&mut rng, ring, 3));
                let x = FractionElem::from_ring(random_elem(&mut rng, ring, 3));
                let tau = TwistedPoly::new(vec![
                    FractionElem::zero(ring),
                    FractionElem::one(ring),
                ]);
                let tc = tau.mul(&TwistedPoly::constant(c.clone()));
                let lhs = tc.eval(&x).unwrap_or_else(|| FractionElem::zero(ring));
                let rhs = c.pow_q().mul(&x.pow_q());
                assert!(lhs.eq(&rhs));
            }
        }
    }

    #[test]
    fn associativity_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xa550c);
        for ring in [RingId::a0_f3(), RingId::A1] {
            for _ in 0..100 {
                let a = random_twisted(&mut rng, ring, 2);
                let b = random_twisted(&mut rng, ring, 2);
                let c = random_twisted(&mut rng, ring, 2);
                let lhs = a.mul(&b).mul(&c);
                let rhs = a.mul(&b.mul(&c));
                assert_eq!(lhs.c.len(), rhs.c.len());
                for (x, y) in lhs.c.iter().zip(rhs.c.iter()) {
                    assert!(x.eq(y));
                }
            }
        }
    }

    #[test]
    fn composition_is_evaluation() {
        // (f g)(x) = f(g(x)) on random points
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
        for ring in [RingId::a0_f3(), RingId::A1] {
            for _ in 0..200 {
                let f = random_twisted(&mut rng, ring, 2);
                let g = random_twisted(&mut rng, ring, 2);
                let x = FractionElem::from_ring(random_elem(&mut rng, ring, 2));
                let zero = FractionElem::zero(ring);
                let lhs = f.mul(&g).eval(&x).unwrap_or_else(|| zero.clone());
                let gx = g.eval(&x).unwrap_or_else(|| zero.clone());
                let rhs = f.eval(&gx).unwrap_or(zero);
                assert!(lhs.eq(&rhs));
            }
        }
    }
}
