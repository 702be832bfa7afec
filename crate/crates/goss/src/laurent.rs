//! Truncated Laurent series in extensions of the completion at infinity.
//!
//! A working field is `F_{q^k}((v))` with `v^e = u`, where `u` is the
//! uniformizer convention of the attached ring: `u = 1/t` for A0 and
//! `u = t/e` for A1. An element stores its valuation `v0` (in `v`-units)
//! and a window of known coefficients `[v0, v0 + len)`; every operation
//! propagates the correct window. `|x| = q^(-v0/e)`, reported as an exact
//! rational power of `q`.
//!
//! Elements that cancel to nothing within their window are "zero to
//! precision": the window edge is kept so callers can report residual
//! valuations honestly.

use crate::field::{field, Code, FieldId};
use crate::fqpoly::FqPoly;
use crate::rings::{FractionElem, RingElem, RingId};
use crate::{GossError, Result};
use once_cell::sync::{Lazy, OnceCell};
use std::sync::RwLock;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SpecId(pub u32);

pub struct SpecData {
    pub id: SpecId,
    pub field: FieldId,
    pub e: u32,
    pub n: usize,
    pub ring: RingId,
    theta: OnceCell<LaurentElem>,
    eta: OnceCell<LaurentElem>,
}

static SPECS: Lazy<RwLock<Vec<&'static SpecData>>> = Lazy::new(|| RwLock::new(Vec::new()));

/// Intern a local-field spec. The constant field must contain the ring's
/// base field.
pub fn spec(f: FieldId, e: u32, n: usize, ring: RingId) -> SpecId {
    assert!(e >= 1 && n >= 1);
    {
        let reg = SPECS.read().unwrap();
        if let Some(s) = reg
            .iter()
            .find(|s| s.field == f && s.e == e && s.n == n && s.ring == ring)
        {
            return s.id;
        }
    }
    let base = ring.base_field().rf();
    let fd = f.rf();
    assert!(fd.p == base.p && fd.k % base.k == 0, "constant field mismatch");
    let mut reg = SPECS.write().unwrap();
    if let Some(s) = reg
        .iter()
        .find(|s| s.field == f && s.e == e && s.n == n && s.ring == ring)
    {
        return s.id;
    }
    let id = SpecId(reg.len() as u32);
    let data = Box::leak(Box::new(SpecData {
        id,
        field: f,
        e,
        n,
        ring,
        theta: OnceCell::new(),
        eta: OnceCell::new(),
    }));
    reg.push(data);
    id
}

impl SpecId {
    pub fn rf(self) -> &'static SpecData {
        SPECS.read().unwrap()[self.0 as usize]
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentElem {
    pub spec: SpecId,
    pub v0: i128,
    pub c: Vec<Code>,
}

impl std::fmt::Debug for LaurentElem {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fmt, "{}", self.print())
    }
}

impl LaurentElem {
    /// Normalize: strip leading zeros into the valuation, cap the window at
    /// the spec precision.
    fn normalized(spec: SpecId, mut v0: i128, mut c: Vec<Code>) -> Self {
        let n = spec.rf().n;
        let lead = c.iter().position(|&x| x != 0);
        match lead {
            Some(k) => {
                if k > 0 {
                    c.drain(0..k);
                    v0 += k as i128;
                }
                if c.len() > n {
                    c.truncate(n);
                }
            }
            None => {
                v0 += c.len() as i128;
                c.clear();
            }
        }
        LaurentElem { spec, v0, c }
    }

    /// Zero known through `O(v^upper)`.
    pub fn zero_to(spec: SpecId, upper: i128) -> Self {
        LaurentElem { spec, v0: upper, c: Vec::new() }
    }

    /// Zero at full spec precision around valuation 0.
    pub fn zero(spec: SpecId) -> Self {
        Self::zero_to(spec, spec.rf().n as i128)
    }

    /// Exact monomial `a * v^v0`, known to full width.
    pub fn monomial(spec: SpecId, a: Code, v0: i128) -> Self {
        if a == 0 {
            return Self::zero_to(spec, v0 + spec.rf().n as i128);
        }
        let mut c = vec![0; spec.rf().n];
        c[0] = a;
        LaurentElem { spec, v0, c }
    }

    pub fn one(spec: SpecId) -> Self {
        Self::monomial(spec, 1, 0)
    }

    pub fn from_field_const(spec: SpecId, a: Code) -> Self {
        Self::monomial(spec, a, 0)
    }

    pub fn is_zero_to_prec(&self) -> bool {
        self.c.is_empty()
    }

    /// Valuation in `v`-units; `None` when zero to precision.
    pub fn val(&self) -> Option<i128> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.v0)
        }
    }

    /// First index at which the element is unknown.
    pub fn upper(&self) -> i128 {
        self.v0 + self.c.len() as i128
    }

    pub fn width(&self) -> usize {
        self.c.len()
    }

    pub fn leading(&self) -> Result<Code> {
        self.c.first().copied().ok_or(GossError::ZeroToPrecision)
    }

    fn coeff_at(&self, pos: i128) -> Code {
        if pos < self.v0 {
            return 0;
        }
        let idx = pos - self.v0;
        if idx >= self.c.len() as i128 {
            0
        } else {
            self.c[idx as usize]
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.spec, o.spec, "mixed local-field specs");
        let up = self.upper().min(o.upper());
        let lo = self.v0.min(o.v0).min(up);
        let fd = self.spec.rf().field.rf();
        let mut c = Vec::with_capacity((up - lo) as usize);
        for pos in lo..up {
            c.push(fd.add(self.coeff_at(pos), o.coeff_at(pos)));
        }
        Self::normalized(self.spec, lo, c)
    }

    pub fn neg(&self) -> Self {
        let fd = self.spec.rf().field.rf();
        LaurentElem {
            spec: self.spec,
            v0: self.v0,
            c: self.c.iter().map(|&a| fd.neg(a)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Code) -> Self {
        if a == 0 {
            return Self::zero_to(self.spec, self.upper());
        }
        let fd = self.spec.rf().field.rf();
        LaurentElem {
            spec: self.spec,
            v0: self.v0,
            c: self.c.iter().map(|&b| fd.mul(a, b)).collect(),
        }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i128) -> Self {
        LaurentElem {
            spec: self.spec,
            v0: self.v0 + k,
            c: self.c.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.spec, o.spec, "mixed local-field specs");
        if self.c.is_empty() || o.c.is_empty() {
            return Self::zero_to(self.spec, self.v0 + o.v0);
        }
        let width = self.c.len().min(o.c.len()).min(self.spec.rf().n);
        let fd = self.spec.rf().field.rf();
        let mut c = vec![0 as Code; width];
        if fd.q == 3 {
            // hot path: accumulate integer sums, reduce once
            let mut acc = vec![0u32; width];
            for (i, &ai) in self.c.iter().enumerate().take(width) {
                if ai == 0 {
                    continue;
                }
                let jmax = width - i;
                for (j, &bj) in o.c.iter().enumerate().take(jmax) {
                    acc[i + j] += ai as u32 * bj as u32;
                }
            }
            for (slot, &v) in c.iter_mut().zip(acc.iter()) {
                *slot = (v % 3) as Code;
            }
        } else {
            for (i, &ai) in self.c.iter().enumerate().take(width) {
                if ai == 0 {
                    continue;
                }
                let jmax = width - i;
                for (j, &bj) in o.c.iter().enumerate().take(jmax) {
                    c[i + j] = fd.add(c[i + j], fd.mul(ai, bj));
                }
            }
        }
        Self::normalized(self.spec, self.v0 + o.v0, c)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.c.is_empty() {
            return Err(GossError::ZeroToPrecision);
        }
        let fd = self.spec.rf().field.rf();
        let l = self.c.len();
        let c0inv = fd.inv(self.c[0]);
        let mut w = vec![0 as Code; l];
        w[0] = c0inv;
        for k in 1..l {
            let mut s = 0 as Code;
            for j in 1..=k {
                s = fd.add(s, fd.mul(self.c[j], w[k - j]));
            }
            w[k] = fd.neg(fd.mul(s, c0inv));
        }
        Ok(Self::normalized(self.spec, -self.v0, w))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Frobenius `x -> x^p`: coefficient powers spread to `p`-multiples of
    /// the exponents. Exact in characteristic `p`.
    pub fn frob_p(&self) -> Self {
        let sd = self.spec.rf();
        let p = sd.field.rf().p as usize;
        if self.c.is_empty() {
            return Self::zero_to(self.spec, self.v0 * p as i128);
        }
        let fd = sd.field.rf();
        let width = ((self.c.len() - 1) * p + 1).min(sd.n);
        let mut c = vec![0 as Code; width];
        for (j, &a) in self.c.iter().enumerate() {
            if j * p < width {
                c[j * p] = fd.frob(a);
            }
        }
        Self::normalized(self.spec, self.v0 * p as i128, c)
    }

    /// `x^(q^i)` by repeated Frobenius, `q` the constant-field size of the
    /// attached ring's base field.
    pub fn pow_qpow(&self, i: u32) -> Self {
        let base_k = self.spec.rf().ring.base_field().rf().k;
        let mut x = self.clone();
        for _ in 0..(i * base_k) {
            x = x.frob_p();
        }
        x
    }

    /// Integer power. Factors of the characteristic are taken by exact
    /// Frobenius spreads, the rest by square-and-multiply.
    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            return Self::one(self.spec);
        }
        let p = self.spec.rf().field.rf().p as u64;
        let mut e = e;
        let mut spreads = 0;
        while e % p == 0 {
            e /= p;
            spreads += 1;
        }
        let mut x = self.pow_simple(e);
        for _ in 0..spreads {
            x = x.frob_p();
        }
        x
    }

    /// Compare `|self|` with `|other|`; exact rational comparison of
    /// `-v0/e`. Zero-to-precision sorts below everything nonzero.
    pub fn abs_cmp(&self, o: &Self) -> std::cmp::Ordering {
        let ea = self.spec.rf().e as i128;
        let eb = o.spec.rf().e as i128;
        match (self.val(), o.val()) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            (Some(va), Some(vb)) => (vb * ea).cmp(&(va * eb)),
        }
    }

    /// `|x|` as the exact exponent pair `(a, b)` with `|x| = q^(a/b)`.
    pub fn abs_exponent(&self) -> Result<(i128, u32)> {
        match self.val() {
            None => Err(GossError::ZeroToPrecision),
            Some(v) => Ok((-v, self.spec.rf().e)),
        }
    }

    /// Keep only coefficients strictly below `upper`.
    pub fn with_upper(&self, upper: i128) -> Self {
        if upper >= self.upper() {
            return self.clone();
        }
        if upper <= self.v0 {
            return Self::zero_to(self.spec, upper);
        }
        let keep = (upper - self.v0) as usize;
        Self::normalized(self.spec, self.v0, self.c.iter().take(keep).copied().collect())
    }

    /// Reinterpret under a wider/narrower spec with the same field, `e`,
    /// and ring convention.
    pub fn with_spec(&self, s: SpecId) -> Self {
        let (a, b) = (self.spec.rf(), s.rf());
        assert!(a.field == b.field && a.e == b.e && a.ring == b.ring);
        let mut c = self.c.clone();
        c.truncate(b.n);
        LaurentElem { spec: s, v0: self.v0, c }
    }

    pub fn print(&self) -> String {
        if self.c.is_empty() {
            return format!("O(v^{})", self.v0);
        }
        let mut terms = Vec::new();
        for (j, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let pos = self.v0 + j as i128;
            let t = match (a, pos) {
                (c, 0) => format!("{c}"),
                (1, 1) => "v".into(),
                (c, 1) => format!("{c}*v"),
                (1, p) => format!("v^{p}"),
                (c, p) => format!("{c}*v^{p}"),
            };
            terms.push(t);
        }
        terms.push(format!("O(v^{})", self.upper()));
        terms.join(" + ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let sd = self.spec.rf();
        let fd = sd.field.rf();
        serde_json::json!({
            "p": fd.p,
            "k": fd.k,
            "e": sd.e,
            "v0": self.v0 as i64,
            "coeffs": self.c.iter().map(|&c| c as u32).collect::<Vec<_>>(),
            "precision": self.c.len(),
        })
    }
}

/// Plain square-and-multiply power (no Frobenius peeling); `pow` above
/// delegates here for exponents coprime to p.
impl LaurentElem {
    pub fn pow_simple(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.spec);
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
}

// ---------------------------------------------------------------------------
// embeddings

impl SpecData {
    /// `u` as an element: `v^e`, exact.
    pub fn u(&self) -> LaurentElem {
        LaurentElem::monomial(self.id, 1, self.e as i128)
    }

    /// The ring's `t` in this field.
    pub fn theta(&self) -> LaurentElem {
        self.theta
            .get_or_init(|| match self.ring {
                RingId::A0(_) => LaurentElem::monomial(self.id, 1, -(self.e as i128)),
                RingId::A1 => self.u().mul(&self.eta()),
            })
            .clone()
    }

    /// The A1 generator `e(u)`: the branch of
    /// `x^2 = u^3 x^3 - u x - 1` with sign 1, solved by Newton iteration.
    pub fn eta(&self) -> LaurentElem {
        assert_eq!(self.ring, RingId::A1, "eta lives in the A1 convention");
        self.eta
            .get_or_init(|| {
                let u = self.u();
                let u3 = u.mul(&u).mul(&u);
                let one = LaurentElem::one(self.id);
                // f(x) = u^3 x^3 - x^2 - u x - 1
                let f = vec![one.neg(), u.neg(), one.neg(), u3];
                let seed = LaurentElem::monomial(self.id, 1, -3 * self.e as i128);
                newton_root(&f, &seed).expect("eta series solve")
            })
            .clone()
    }
}

/// Embed a polynomial in `t` by Horner. The accumulator starts as "zero
/// known everywhere" so the window of the result is set by the leading
/// term, not by the seed.
pub fn embed_theta_poly(p: &FqPoly, s: SpecId) -> LaurentElem {
    let sd = s.rf();
    let theta = sd.theta();
    let mut acc = LaurentElem::zero_to(s, EXACT_ZERO_UPPER);
    for &a in p.c.iter().rev() {
        acc = acc.mul(&theta);
        if a != 0 {
            acc = acc.add(&LaurentElem::from_field_const(s, constant_into(a, p.f, sd.field)));
        }
    }
    acc
}

/// Window edge used for exact zeros: far enough out to never constrain a
/// real computation.
pub const EXACT_ZERO_UPPER: i128 = i128::MAX / 4;

/// Map a base-field code into the constant field of the spec. The base
/// field is always the prime-subfield image here (codes agree).
fn constant_into(a: Code, from: FieldId, to: FieldId) -> Code {
    if from == to {
        return a;
    }
    let (fa, fb) = (from.rf(), to.rf());
    assert_eq!(fa.p, fb.p);
    assert_eq!(fa.k, 1, "only prime-subfield constants embed implicitly");
    a % fb.p as Code
}

/// Embed a ring element. A homomorphism consistent with sign and degree:
/// the valuation is `-e * deg(a)` and the leading coefficient is the sign.
pub fn embed(a: &RingElem, s: SpecId) -> LaurentElem {
    let sd = s.rf();
    assert_eq!(a.ring, sd.ring, "ring convention mismatch");
    match a.ring {
        RingId::A0(_) => embed_theta_poly(&a.p, s),
        RingId::A1 => {
            let pe = embed_theta_poly(&a.p, s);
            let re = embed_theta_poly(&a.r, s);
            pe.add(&re.mul(&sd.eta()))
        }
    }
}

pub fn embed_fraction(a: &FractionElem, s: SpecId) -> Result<LaurentElem> {
    let num = embed(&a.num, s);
    let den = embed_theta_poly(&a.den, s);
    num.div(&den)
}

/// Sign and degree through the infinity-adic expansion: degree is
/// `-v/e`, sign is the leading coefficient (always in the base field).
pub fn sgn_degree(a: &RingElem) -> Result<(Code, i64)> {
    if a.is_zero() {
        return Err(GossError::ZeroElement);
    }
    let s = default_sgn_spec(a.ring);
    let x = embed(a, s);
    let v = x.val().expect("nonzero ring element embeds nonzero");
    let e = s.rf().e as i128;
    debug_assert_eq!(v % e, 0);
    let lead = x.leading()?;
    assert!(
        s.rf().field.rf().in_prime_subfield(lead) || a.ring.base_field() == s.rf().field,
        "sign escaped the base field"
    );
    Ok((lead, (-v / e) as i64))
}

fn default_sgn_spec(ring: RingId) -> SpecId {
    spec(ring.base_field(), 1, 8, ring)
}

// ---------------------------------------------------------------------------
// root finding

/// Newton iteration on `f(x) = 0` from a seed with `f(seed)` small and
/// `f'(seed)` a unit at scale (a simple root). Coefficients ascending.
pub fn newton_root(f: &[LaurentElem], seed: &LaurentElem) -> Result<LaurentElem> {
    let eval = |x: &LaurentElem| -> LaurentElem {
        let mut acc = LaurentElem::zero_to(x.spec, i128::MAX / 4);
        for c in f.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    };
    let deriv: Vec<LaurentElem> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let fd = c.spec.rf().field.rf();
            c.scale(fd.from_int(i as i64))
        })
        .collect();
    let eval_d = |x: &LaurentElem| -> LaurentElem {
        let mut acc = LaurentElem::zero_to(x.spec, i128::MAX / 4);
        for c in deriv.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    };

    let mut x = seed.clone();
    let mut last_residual: Option<i128> = None;
    for _ in 0..200 {
        let fx = eval(&x);
        if fx.is_zero_to_prec() {
            return Ok(x);
        }
        let fpx = eval_d(&x);
        if fpx.is_zero_to_prec() {
            return Err(GossError::MultipleRoot);
        }
        let delta = fx.div(&fpx)?;
        if delta.is_zero_to_prec() {
            return Ok(x);
        }
        let dval = delta.val().unwrap();
        if dval <= x.val().unwrap_or(dval - 1) {
            return Err(GossError::NoConvergence);
        }
        x = x.sub(&delta);
        let rv = fx.val().unwrap();
        if let Some(prev) = last_residual {
            if rv <= prev {
                return Err(GossError::NoConvergence);
            }
        }
        last_residual = Some(rv);
    }
    Err(GossError::NoConvergence)
}

/// `n`-th root with a chosen leading coefficient. `n` must be coprime to
/// the characteristic and divide the valuation; the leading choice must be
/// an `n`-th root of the leading coefficient (pass `None` to pick the root
/// of smallest discrete log).
pub fn nth_root(x: &LaurentElem, n: u32, leading_choice: Option<Code>) -> Result<LaurentElem> {
    let sd = x.spec.rf();
    let fd = sd.field.rf();
    if n == 0 || n % fd.p == 0 {
        return Err(GossError::Unsupported(format!(
            "n-th root with p | n (n = {n})"
        )));
    }
    let v = x.val().ok_or(GossError::ZeroToPrecision)?;
    if v % n as i128 != 0 {
        return Err(GossError::RamificationNeeded);
    }
    let lead = x.leading()?;
    let choice = match leading_choice {
        Some(c) => {
            if fd.pow(c, n as u64) != lead {
                return Err(GossError::NoRootInField);
            }
            c
        }
        None => {
            let mut best: Option<(u32, Code)> = None;
            for c in 1..fd.q as Code {
                if fd.pow(c, n as u64) == lead {
                    let t = fd.discrete_log(c).unwrap();
                    if best.map(|(bt, _)| t < bt).unwrap_or(true) {
                        best = Some((t, c));
                    }
                }
            }
            best.ok_or(GossError::NoRootInField)?.1
        }
    };
    // Newton on y^n - x
    let mut f = vec![LaurentElem::zero_to(x.spec, i128::MAX / 4); n as usize + 1];
    f[0] = x.neg();
    f[n as usize] = LaurentElem::one(x.spec);
    let seed = LaurentElem::monomial(x.spec, choice, v / n as i128);
    newton_root(&f, &seed)
}

/// Square root convenience; branch with leading coefficient of smallest
/// discrete log unless specified.
pub fn sqrt(x: &LaurentElem, leading_choice: Option<Code>) -> Result<LaurentElem> {
    nth_root(x, 2, leading_choice)
}

/// Relative residual of `a = b`: the valuation gap between `a - b` and the
/// larger of the two operands. `None` means the difference vanished through
/// the full computable window (the best possible outcome); callers convert
/// it to the window width for reporting.
pub fn residual_gap(a: &LaurentElem, b: &LaurentElem) -> (Option<i128>, i128) {
    let d = a.sub(b);
    let scale = match (a.val(), b.val()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) => x,
        (None, Some(y)) => y,
        (None, None) => a.upper().min(b.upper()),
    };
    match d.val() {
        Some(v) => (Some(v - scale), d.upper() - scale),
        None => (None, d.upper() - scale),
    }
}
