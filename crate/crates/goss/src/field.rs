//! Small finite fields `F_{p^k}` with pinned moduli and generators.
//!
//! Every field used in a run is interned in a process-wide registry, so an
//! element is a `(FieldId, code)` pair. The defining modulus for `F_{p^k}`
//! is the lexicographically smallest monic *primitive* polynomial of degree
//! `k` over `F_p` (ordered by descending-power coefficient tuples), and the
//! generator is the class of `y`. Pinning the modulus pins every later
//! convention choice: `sqrt(-1)` in `F_9` is the `(q-1)/4`-th power of the
//! generator, embeddings of residue fields pick roots by smallest discrete
//! log, and so on. The registry records all of this so reports can echo it.

use once_cell::sync::Lazy;
use std::sync::RwLock;

/// Code of a field element: digits base `p` in the polynomial basis,
/// packed as `sum c_i p^i`.
pub type Code = u16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FieldId(pub u32);

pub struct FieldData {
    pub id: FieldId,
    pub p: u32,
    pub k: u32,
    pub q: u32,
    /// Defining modulus, little-endian coefficients over `F_p`, degree `k`.
    /// For `k == 1` this is `[0, 1]`, i.e. the polynomial `y`.
    pub modulus: Vec<u32>,
    /// Fixed multiplicative generator.
    pub generator: Code,
    exp: Vec<Code>,  // exp[t] = g^t for t in 0..2(q-1)
    log: Vec<u32>,   // log[code] for code in 1..q
    add_tab: Vec<Code>, // q*q table when q <= 128, else empty
}

static REGISTRY: Lazy<RwLock<Vec<&'static FieldData>>> = Lazy::new(|| RwLock::new(Vec::new()));

/// Intern the field `F_{p^k}`; repeated calls return the same id.
pub fn field(p: u32, k: u32) -> FieldId {
    assert!(k >= 1 && is_prime(p), "field characteristic must be prime");
    {
        let reg = REGISTRY.read().unwrap();
        if let Some(f) = reg.iter().find(|f| f.p == p && f.k == k) {
            return f.id;
        }
    }
    let mut reg = REGISTRY.write().unwrap();
    if let Some(f) = reg.iter().find(|f| f.p == p && f.k == k) {
        return f.id;
    }
    let id = FieldId(reg.len() as u32);
    let data = Box::leak(Box::new(build_field(id, p, k)));
    reg.push(data);
    id
}

impl FieldId {
    pub fn rf(self) -> &'static FieldData {
        REGISTRY.read().unwrap()[self.0 as usize]
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Is `q` a prime power? Returns `(p, k)` if so.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    for p in 2..=q {
        if q % p == 0 {
            let mut m = q;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
    }
    None
}

// Polynomial helpers over F_p on Vec<u32>, little-endian, used only here.
fn pmod_mul(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // reduce by the monic modulus
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (j, &mj) in modulus.iter().enumerate().take(k) {
            let idx = d - k + j;
            prod[idx] = (prod[idx] + (p - 1) * c % p * mj) % p;
        }
    }
    prod.truncate(k.max(1));
    prod
}

fn pmod_pow(a: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut base = a.to_vec();
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = pmod_mul(&acc, &base, modulus, p);
        }
        base = pmod_mul(&base, &base, modulus, p);
        e >>= 1;
    }
    acc
}

fn is_one(a: &[u32]) -> bool {
    a.first().copied().unwrap_or(0) == 1 && a.iter().skip(1).all(|&c| c == 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Order of the class of `y` modulo the candidate equals `q - 1`?
fn y_is_primitive(modulus: &[u32], p: u32, q: u64) -> bool {
    let y = vec![0, 1];
    if !is_one(&pmod_pow(&y, q - 1, modulus, p)) {
        return false;
    }
    prime_factors(q - 1)
        .into_iter()
        .all(|f| !is_one(&pmod_pow(&y, (q - 1) / f, modulus, p)))
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    // x^(p^k) == x mod modulus, and x^(p^(k/f)) != x for prime f | k
    let k = (modulus.len() - 1) as u32;
    let y = vec![0, 1];
    let qk = (p as u64).pow(k);
    if pmod_pow(&y, qk, modulus, p) != pmod_mul(&y, &[1], modulus, p) {
        return false;
    }
    for f in prime_factors(k as u64) {
        let e = (p as u64).pow(k / f as u32);
        if pmod_pow(&y, e, modulus, p) == pmod_mul(&y, &[1], modulus, p) {
            return false;
        }
    }
    true
}

fn build_field(id: FieldId, p: u32, k: u32) -> FieldData {
    let q = p.pow(k);
    let (modulus, generator_code): (Vec<u32>, Code) = if k == 1 {
        // generator: smallest primitive root mod p
        let g = (1..p)
            .find(|&g| {
                prime_factors((p - 1) as u64)
                    .into_iter()
                    .all(|f| mod_pow(g as u64, ((p - 1) as u64) / f, p as u64) != 1)
            })
            .unwrap_or(1);
        (vec![0, 1], g as Code)
    } else {
        // smallest monic primitive polynomial, descending-power lexicographic
        let mut found = None;
        'outer: for top in 0..q {
            // decode top as (c_{k-1}, ..., c_0) with c_{k-1} most significant
            let mut c = vec![0u32; k as usize + 1];
            c[k as usize] = 1;
            let mut t = top;
            for j in 0..k as usize {
                c[j] = t % p;
                t /= p;
            }
            if is_irreducible(&c, p) && y_is_primitive(&c, p, q as u64) {
                found = Some(c);
                break 'outer;
            }
        }
        (found.expect("no primitive polynomial found"), p as Code)
    };

    // exp/log tables from the generator
    let mut exp = vec![0 as Code; 2 * (q as usize - 1)];
    let mut log = vec![0u32; q as usize];
    let gvec = code_to_vec(generator_code, p, k);
    let mut cur = vec![1u32];
    for (t, slot) in exp.iter_mut().take(q as usize - 1).enumerate() {
        let code = vec_to_code(&cur, p);
        *slot = code;
        log[code as usize] = t as u32;
        cur = pmod_mul(&cur, &gvec, &modulus, p);
    }
    assert!(is_one(&cur), "generator order mismatch");
    for t in 0..(q as usize - 1) {
        exp[t + q as usize - 1] = exp[t];
    }

    let add_tab = if q <= 128 {
        let mut tab = vec![0 as Code; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                tab[(a * q + b) as usize] = add_codes(a as Code, b as Code, p, k);
            }
        }
        tab
    } else {
        Vec::new()
    };

    FieldData {
        id,
        p,
        k,
        q,
        modulus,
        generator: generator_code,
        exp,
        log,
        add_tab,
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn code_to_vec(code: Code, p: u32, k: u32) -> Vec<u32> {
    let mut v = vec![0u32; k as usize];
    let mut c = code as u32;
    for slot in v.iter_mut() {
        *slot = c % p;
        c /= p;
    }
    v
}

fn vec_to_code(v: &[u32], p: u32) -> Code {
    let mut code = 0u32;
    for &c in v.iter().rev() {
        code = code * p + c;
    }
    code as Code
}

fn add_codes(a: Code, b: Code, p: u32, k: u32) -> Code {
    let (mut a, mut b) = (a as u32, b as u32);
    let mut out = 0u32;
    let mut mult = 1u32;
    for _ in 0..k {
        out += (a % p + b % p) % p * mult;
        a /= p;
        b /= p;
        mult *= p;
    }
    out as Code
}

impl FieldData {
    #[inline]
    pub fn add(&self, a: Code, b: Code) -> Code {
        if !self.add_tab.is_empty() {
            self.add_tab[(a as u32 * self.q + b as u32) as usize]
        } else {
            add_codes(a, b, self.p, self.k)
        }
    }

    #[inline]
    pub fn neg(&self, a: Code) -> Code {
        if a == 0 {
            return 0;
        }
        let mut v = code_to_vec(a, self.p, self.k);
        for c in v.iter_mut() {
            *c = (self.p - *c) % self.p;
        }
        vec_to_code(&v, self.p)
    }

    #[inline]
    pub fn sub(&self, a: Code, b: Code) -> Code {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Code, b: Code) -> Code {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    #[inline]
    pub fn inv(&self, a: Code) -> Code {
        assert!(a != 0, "inverse of zero");
        self.exp[(self.q - 1 - self.log[a as usize]) as usize]
    }

    pub fn pow(&self, a: Code, e: u64) -> Code {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let t = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[t as usize]
    }

    /// Frobenius `x -> x^p`.
    #[inline]
    pub fn frob(&self, a: Code) -> Code {
        self.pow(a, self.p as u64)
    }

    /// `sqrt(-1)`: the `(q-1)/4`-th power of the recorded generator.
    pub fn sqrt_minus_one(&self) -> Code {
        assert!(self.q % 4 == 1, "no pinned sqrt(-1) in this field");
        self.exp[((self.q - 1) / 4) as usize]
    }

    pub fn discrete_log(&self, a: Code) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    /// All elements, in code order.
    pub fn elements(&self) -> impl Iterator<Item = Code> {
        0..self.q as Code
    }

    /// Does the code lie in the prime subfield?
    pub fn in_prime_subfield(&self, a: Code) -> bool {
        (a as u32) < self.p
    }

    /// n mod p as a field element.
    pub fn from_int(&self, n: i64) -> Code {
        (n.rem_euclid(self.p as i64)) as Code
    }

    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "y".to_string(),
                (1, c) => format!("{c}*y"),
                (i, 1) => format!("y^{i}"),
                (i, c) => format!("{c}*y^{i}"),
            };
            terms.push(t);
        }
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_pinned_modulus_and_sqrt_minus_one() {
        let f = field(3, 2).rf();
        // y^2 + y + 2 is the first primitive candidate in the pinned order
        assert_eq!(f.modulus, vec![2, 1, 1]);
        assert_eq!(f.generator, 3); // class of y
        let i = f.sqrt_minus_one();
        assert_eq!(f.mul(i, i), 2); // i^2 = -1 = 2
    }

    #[test]
    fn field_axioms_f9() {
        let f = field(3, 2).rf();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for c in f.elements() {
                    let lhs = f.mul(a, f.add(b, c));
                    let rhs = f.add(f.mul(a, b), f.mul(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        let f = field(3, 2).rf();
        for a in f.elements() {
            let fixed = f.frob(a) == a;
            assert_eq!(fixed, f.in_prime_subfield(a));
        }
    }

    #[test]
    fn generator_order() {
        for (p, k) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3)] {
            let f = field(p, k).rf();
            let mut x = f.generator;
            let mut ord = 1;
            while x != 1 {
                x = f.mul(x, f.generator);
                ord += 1;
            }
            assert_eq!(ord, f.q - 1);
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(5), Some((5, 1)));
    }
}
