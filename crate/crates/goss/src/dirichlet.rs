//! Residue fields of irreducible monics and Dirichlet characters mod a
//! prime. The residue field is realized inside an interned `F_{q^d}` by
//! sending the ring generators to pinned roots of the defining data (the
//! root of smallest discrete log with respect to the recorded generator),
//! so values like `sqrt(-1)` are reproducible across runs.

use crate::field::{field, Code, FieldId};
use crate::laurent::{sgn_degree, LaurentElem, SpecId};
use crate::rings::{RingElem, RingId};
use crate::{GossError, Result};

pub struct ResidueField {
    pub ring: RingId,
    pub prime: RingElem,
    /// Residue extension degree over the base field: `#(A/prime) = q^d`.
    pub d: u32,
    pub fld: FieldId,
    pub theta_image: Code,
    pub eta_image: Option<Code>,
    /// Canonical representative for each residue code. Representatives are
    /// the elements of degree lower than the prime's, matched through the
    /// evaluation map.
    reps: Vec<RingElem>,
}

/// Build the residue field `A/(prime)` with its evaluation map.
pub fn residue_field_map(prime: &RingElem) -> Result<ResidueField> {
    if !prime.is_monic() {
        return Err(GossError::NotIrreducible(prime.to_text()));
    }
    let base = prime.ring.base_field().rf();
    match prime.ring {
        RingId::A0(bf) => {
            if !prime.p.is_irreducible() {
                return Err(GossError::NotIrreducible(prime.to_text()));
            }
            let d = prime.p.degree() as u32;
            let fld = field(base.p, base.k * d);
            let fd = fld.rf();
            // theta goes to the pinned root of the prime in F_{q^d}
            let mut roots: Vec<Code> = fd
                .elements()
                .filter(|&x| eval_lift(&prime.p, bf, fld, x) == 0)
                .collect();
            if roots.is_empty() {
                return Err(GossError::InsufficientField(format!(
                    "no root of {} in the residue field",
                    prime.to_text()
                )));
            }
            roots.sort_by_key(|&r| fd.discrete_log(r).map(|t| t as i64).unwrap_or(-1));
            let theta_image = roots[0];
            let mut rf = ResidueField {
                ring: prime.ring,
                prime: prime.clone(),
                d,
                fld,
                theta_image,
                eta_image: None,
                reps: Vec::new(),
            };
            rf.build_reps()?;
            Ok(rf)
        }
        RingId::A1 => {
            // supported: primes t + c, residue field F_9
            if !(prime.r.is_zero() && prime.p.degree() == 1 && prime.p.leading() == 1) {
                return Err(GossError::Unsupported(format!(
                    "A1 residue fields implemented for primes t + c only, got {}",
                    prime.to_text()
                )));
            }
            let fld = field(3, 2);
            let fd = fld.rf();
            let theta_image = fd.neg(prime.p.coeff(0));
            // eta goes to the pinned square root of t^3 - t - 1 at theta_image
            let target = eval_lift(&prime.ring.eta_square(), prime.ring.base_field(), fld, theta_image);
            let mut roots: Vec<Code> = fd.elements().filter(|&x| fd.mul(x, x) == target).collect();
            if roots.is_empty() {
                return Err(GossError::NotIrreducible(prime.to_text()));
            }
            roots.sort_by_key(|&r| fd.discrete_log(r).map(|t| t as i64).unwrap_or(-1));
            let mut rf = ResidueField {
                ring: prime.ring,
                prime: prime.clone(),
                d: 2,
                fld,
                theta_image,
                eta_image: Some(roots[0]),
                reps: Vec::new(),
            };
            rf.build_reps()?;
            Ok(rf)
        }
    }
}

/// Evaluate a base-field polynomial at a point of the extension.
fn eval_lift(p: &crate::fqpoly::FqPoly, _from: FieldId, to: FieldId, x: Code) -> Code {
    let fd = to.rf();
    let mut acc = 0;
    for &a in p.c.iter().rev() {
        acc = fd.add(fd.mul(acc, x), a % fd.p as Code);
    }
    acc
}

impl ResidueField {
    /// Ring homomorphism onto the residue field.
    pub fn map(&self, a: &RingElem) -> Code {
        assert_eq!(a.ring, self.ring);
        let fd = self.fld.rf();
        let pv = eval_lift(&a.p, a.ring.base_field(), self.fld, self.theta_image);
        match self.eta_image {
            None => pv,
            Some(ei) => {
                let rv = eval_lift(&a.r, a.ring.base_field(), self.fld, self.theta_image);
                fd.add(pv, fd.mul(rv, ei))
            }
        }
    }

    fn build_reps(&mut self) -> Result<()> {
        let size = self.fld.rf().q as usize;
        let mut reps: Vec<Option<RingElem>> = vec![None; size];
        let pole = self.prime.pole_order().unwrap();
        let mut count = 0;
        // all elements of degree < deg(prime): zero plus spans of the basis
        let basis: Vec<RingElem> = crate::rings::basis_by_pole(self.ring, pole - 1)
            .into_iter()
            .filter(|b| b.pole_order().unwrap_or(-1) < pole)
            .collect();
        let q = self.ring.base_field().rf().q;
        let mut digits = vec![0 as Code; basis.len()];
        loop {
            let mut a = RingElem::zero(self.ring);
            for (b, &c) in basis.iter().zip(digits.iter()) {
                if c != 0 {
                    a = a.add(&b.scale(c));
                }
            }
            let code = self.map(&a) as usize;
            if reps[code].is_none() {
                reps[code] = Some(a);
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == digits.len() {
                    if count != size {
                        return Err(GossError::NotIrreducible(self.prime.to_text()));
                    }
                    self.reps = reps.into_iter().map(|r| r.unwrap()).collect();
                    return Ok(());
                }
                digits[k] += 1;
                if (digits[k] as u32) < q {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }

    pub fn rep(&self, code: Code) -> &RingElem {
        &self.reps[code as usize]
    }

    /// Nonzero residue codes, ascending.
    pub fn unit_codes(&self) -> impl Iterator<Item = Code> {
        1..self.fld.rf().q as Code
    }

    pub fn size(&self) -> u32 {
        self.fld.rf().q
    }
}

/// A Dirichlet character mod the prime: the `j`-th power of the canonical
/// residue character, zero on multiples of the prime.
pub struct DirichletCharacter<'a> {
    pub res: &'a ResidueField,
    pub j: u32,
}

impl<'a> DirichletCharacter<'a> {
    pub fn new(res: &'a ResidueField, j: u32) -> Self {
        DirichletCharacter { res, j }
    }

    pub fn order(&self) -> u32 {
        let n = self.res.size() - 1;
        let g = gcd_u32(self.j % n, n);
        if self.j % n == 0 {
            1
        } else {
            n / g
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.j % (self.res.size() - 1) == 0
    }

    /// Value on a residue code (not on ring elements): `code^j`.
    pub fn on_code(&self, code: Code) -> Code {
        if code == 0 {
            return 0;
        }
        self.res.fld.rf().pow(code, self.j as u64)
    }

    pub fn eval(&self, a: &RingElem) -> Code {
        self.on_code(self.res.map(a))
    }

    /// Character value as a constant of the working local field. Residue
    /// values must land in the spec's constant field (equal fields, or a
    /// prime-subfield inclusion).
    pub fn eval_in(&self, a: &RingElem, s: SpecId) -> LaurentElem {
        let v = self.eval(a);
        LaurentElem::from_field_const(s, lift_const(v, self.res.fld, s.rf().field))
    }
}

/// Inclusion of residue values into the constant field of a spec.
pub fn lift_const(v: Code, from: FieldId, to: FieldId) -> Code {
    if from == to {
        return v;
    }
    let (fa, fb) = (from.rf(), to.rf());
    assert_eq!(fa.p, fb.p, "characteristic mismatch");
    assert_eq!(fa.k, 1, "only prime-subfield residue values lift implicitly");
    assert!(fa.p == fb.p && (v as u32) < fa.p);
    v
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Verify consistency data the callers rely on: sign/degree sanity of the
/// prime.
pub fn check_prime(prime: &RingElem) -> Result<()> {
    let (s, _) = sgn_degree(prime)?;
    if s != 1 {
        return Err(GossError::NotIrreducible(prime.to_text()));
    }
    Ok(())
}
