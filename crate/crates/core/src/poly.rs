//! Dense integer polynomials (ascending coefficients), resultants and
//! discriminants, irreducibility over the integers at desk degree, and
//! factorization modulo a prime.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::IntMatrix;
use crate::{Int, Rat};

/// Integer polynomial, coefficients ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub coeffs: Vec<Int>,
}

impl std::fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().map_or(false, Int::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![Int::one()],
        }
    }

    /// x^n - c
    pub fn x_pow_minus(n: usize, c: Int) -> Self {
        let mut v = vec![Int::zero(); n + 1];
        v[0] = -c;
        v[n] = Int::one();
        IntPoly::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn leading(&self) -> &Int {
        self.coeffs.last().expect("leading of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, Int::is_one)
    }

    pub fn coeff(&self, i: usize) -> Int {
        self.coeffs.get(i).cloned().unwrap_or_else(Int::zero)
    }

    pub fn neg(&self) -> Self {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![Int::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }

    pub fn scale(&self, k: &Int) -> Self {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &Int) -> Int {
        let mut acc = Int::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Int::from(i))
                .collect(),
        )
    }

    /// gcd of the coefficients (nonnegative).
    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact division; `None` when `other` does not divide `self` over Z.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let (ds, dd) = (self.deg(), other.deg());
        if ds < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Int::zero(); ds - dd + 1];
        let lc = other.leading();
        for k in (0..=ds - dd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in other.coeffs.iter().enumerate() {
                let t = &q * c;
                rem[k + j] -= t;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(quot))
    }

    /// Pseudo-remainder: lc(d)^(deg n - deg d + 1) * n = q*d + r.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero());
        let mut n = self.clone();
        let dd = d.deg();
        let lc = d.leading().clone();
        while !n.is_zero() && n.deg() >= dd {
            let shift = n.deg() - dd;
            let ln = n.leading().clone();
            // n = lc*n - ln * x^shift * d
            let mut shifted = vec![Int::zero(); shift];
            shifted.extend(d.coeffs.iter().map(|c| c * &ln));
            n = n.scale(&lc).sub(&IntPoly::new(shifted));
        }
        n
    }

    /// Polynomial gcd over Z, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let content_gcd = self.content().gcd(&other.content());
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive().scale(&content_gcd)
    }

    pub fn is_squarefree(&self) -> bool {
        let g = self.gcd(&self.derivative());
        g.degree() == Some(0)
    }

    /// Resultant via the Sylvester matrix (Bareiss determinant).
    pub fn resultant(&self, other: &Self) -> Int {
        if self.is_zero() || other.is_zero() {
            return Int::zero();
        }
        let (m, n) = (self.deg(), other.deg());
        if m == 0 {
            return num_traits::pow::pow(self.coeffs[0].clone(), n);
        }
        if n == 0 {
            return num_traits::pow::pow(other.coeffs[0].clone(), m);
        }
        let size = m + n;
        let mut s = IntMatrix::zero(size, size);
        for r in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                *s.at_mut(r, r + j) = c.clone();
            }
        }
        for r in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                *s.at_mut(n + r, r + j) = c.clone();
            }
        }
        s.det()
    }

    /// disc(f) = (-1)^(n(n-1)/2) res(f, f') / lc(f).
    pub fn discriminant(&self) -> Int {
        let n = self.deg();
        let res = self.resultant(&self.derivative());
        let q = res / self.leading();
        if (n * (n - 1) / 2) % 2 == 1 {
            -q
        } else {
            q
        }
    }

    /// Cauchy bound: all complex roots have |z| < 1 + max|a_i|/|a_n|.
    pub fn root_bound(&self) -> Rat {
        let lc = Rat::from_integer(self.leading().abs());
        let mut best = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let v = Rat::from_integer(c.abs()) / lc.clone();
            if v > best {
                best = v;
            }
        }
        best + Rat::one()
    }

    /// Integer roots of a monic polynomial (divisors of the constant term).
    pub fn integer_roots_monic(&self) -> Vec<Int> {
        assert!(self.is_monic());
        let c0 = self.coeff(0);
        if c0.is_zero() {
            let mut r = vec![Int::zero()];
            // factor out x and recurse
            let reduced = IntPoly::new(self.coeffs[1..].to_vec());
            if reduced.degree().is_some() && reduced.is_monic() {
                r.extend(reduced.integer_roots_monic());
            }
            r.sort();
            r.dedup();
            return r;
        }
        let mut roots = Vec::new();
        for d in divisors(&c0.abs()) {
            for cand in [d.clone(), -d] {
                if self.eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

/// All positive divisors of `n` (n > 0), desk scale by trial division.
pub fn divisors(n: &Int) -> Vec<Int> {
    assert!(n.is_positive());
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = Int::one();
    loop {
        let dsq = &d * &d;
        if &dsq > n {
            break;
        }
        if n.mod_floor(&d).is_zero() {
            small.push(d.clone());
            if &dsq != n {
                large.push(n / &d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Factor a positive integer by trial division (desk scale).
pub fn factor_int(n: &Int) -> Vec<(Int, u32)> {
    assert!(n.is_positive());
    let mut n = n.clone();
    let mut out: Vec<(Int, u32)> = Vec::new();
    let mut p = Int::from(2);
    while &(&p * &p) <= &n {
        if n.mod_floor(&p).is_zero() {
            let mut e = 0u32;
            while n.mod_floor(&p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += if p == Int::from(2) { 1 } else { 2 };
    }
    if n > Int::one() {
        out.push((n, 1));
    }
    out
}

// ---------------------------------------------------------------------------
// Irreducibility over Z at desk degree.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrreducibilityError {
    /// The Kronecker divisor enumeration exceeded its budget; inputs this
    /// large are outside the supported desk scale.
    SearchBudgetExceeded,
}

impl std::fmt::Display for IrreducibilityError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "irreducibility search budget exceeded")
    }
}

impl std::error::Error for IrreducibilityError {}

/// Decide irreducibility of a monic integer polynomial over Q.
///
/// Strategy: squarefree and rational-root screens, then factor patterns
/// modulo several good primes (sound certificate of irreducibility when the
/// subset sums admit no proper degree), and finally a complete Kronecker
/// search over the remaining candidate degrees.
pub fn is_irreducible(f: &IntPoly) -> Result<bool, IrreducibilityError> {
    assert!(f.is_monic(), "irreducibility test expects monic input");
    let n = f.deg();
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    if !f.is_squarefree() {
        return Ok(false);
    }
    if !f.integer_roots_monic().is_empty() {
        return Ok(false);
    }
    if n <= 3 {
        // monic degree 2 or 3 is irreducible iff it has no integer root
        return Ok(true);
    }
    // possible proper factor degrees, narrowed by mod-p factor patterns
    let mut allowed: Vec<bool> = vec![true; n + 1]; // allowed[d] for 1 <= d <= n-1
    allowed[0] = false;
    allowed[n] = false;
    allowed[1] = false; // no rational roots
    let disc = f.discriminant();
    let mut p = 2u64;
    let mut primes_used = 0;
    while primes_used < 10 {
        let pi = Int::from(p);
        if !disc.mod_floor(&pi).is_zero() {
            let fp = modp::Poly::from_int_poly(f, p);
            let degs: Vec<usize> = modp::factor(&fp)
                .into_iter()
                .flat_map(|(g, e)| std::iter::repeat(g.deg()).take(e as usize))
                .collect();
            // subset sums of the factor degrees
            let mut reach = vec![false; n + 1];
            reach[0] = true;
            for d in &degs {
                for i in (0..=n - d).rev() {
                    if reach[i] {
                        reach[i + d] = true;
                    }
                }
            }
            for d in 1..n {
                if !reach[d] {
                    allowed[d] = false;
                }
            }
            primes_used += 1;
            if (1..n).all(|d| !allowed[d]) {
                return Ok(true);
            }
        }
        p = next_prime_u64(p);
    }
    // Kronecker: complete search for a factor of each remaining degree <= n/2
    for d in 2..=n / 2 {
        if !allowed[d] && !allowed[n - d] {
            continue;
        }
        if kronecker_factor_of_degree(f, d)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn next_prime_u64(p: u64) -> u64 {
    let mut q = p + 1;
    loop {
        if is_prime_u64(q) {
            return q;
        }
        q += 1;
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = 29u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

const KRONECKER_BUDGET: u64 = 2_000_000;

/// Search for a monic-compatible factor of exact degree `d` by Kronecker's
/// interpolation method. Complete for the given degree.
fn kronecker_factor_of_degree(
    f: &IntPoly,
    d: usize,
) -> Result<Option<IntPoly>, IrreducibilityError> {
    // evaluation points 0, 1, -1, 2, -2, ...
    let mut points: Vec<Int> = Vec::with_capacity(d + 1);
    let mut k = 0i64;
    while points.len() < d + 1 {
        let x = Int::from(k);
        points.push(x);
        k = if k > 0 { -k } else { -k + 1 };
    }
    let values: Vec<Int> = points.iter().map(|x| f.eval(x)).collect();
    if values.iter().any(Int::is_zero) {
        // an integer root slipped through: reducible
        return Ok(Some(IntPoly::new(vec![
            -points[values.iter().position(Int::is_zero).unwrap()].clone(),
            Int::one(),
        ])));
    }
    let divisor_lists: Vec<Vec<Int>> = values.iter().map(|v| divisors(&v.abs())).collect();
    let mut budget: u64 = 1;
    for dl in &divisor_lists {
        budget = budget.saturating_mul(2 * dl.len() as u64);
        if budget > KRONECKER_BUDGET {
            return Err(IrreducibilityError::SearchBudgetExceeded);
        }
    }
    let mut choice = vec![0usize; d + 1];
    let sizes: Vec<usize> = divisor_lists.iter().map(|l| 2 * l.len()).collect();
    loop {
        let targets: Vec<Int> = (0..=d)
            .map(|i| {
                let idx = choice[i] / 2;
                let v = divisor_lists[i][idx].clone();
                if choice[i] % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        if let Some(g) = interpolate_integer(&points, &targets) {
            if g.degree() == Some(d) && g.div_exact(&g.primitive()).is_some() {
                let gp = g.primitive();
                if gp.degree() == Some(d) {
                    if let Some(_q) = f.div_exact(&gp) {
                        return Ok(Some(gp));
                    }
                }
            }
        }
        // advance mixed-radix counter
        let mut i = 0;
        loop {
            if i > d {
                return Ok(None);
            }
            choice[i] += 1;
            if choice[i] < sizes[i] {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Lagrange interpolation; `None` when the result is not integral.
fn interpolate_integer(points: &[Int], values: &[Int]) -> Option<IntPoly> {
    let n = points.len();
    let mut acc = vec![Rat::zero(); n];
    for i in 0..n {
        // basis polynomial for point i
        let mut basis = vec![Rat::zero(); n];
        basis[0] = Rat::one();
        let mut deg = 0usize;
        let mut denom = Rat::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            // multiply by (x - x_j)
            for k in (0..=deg).rev() {
                let b = basis[k].clone();
                basis[k + 1] += b.clone();
                basis[k] = -b * Rat::from_integer(points[j].clone());
            }
            deg += 1;
            denom *= Rat::from_integer(&points[i] - &points[j]);
        }
        let w = Rat::from_integer(values[i].clone()) / denom;
        for k in 0..n {
            acc[k] += basis[k].clone() * w.clone();
        }
    }
    let mut out = Vec::with_capacity(n);
    for c in acc {
        if !c.denom().is_one() {
            return None;
        }
        out.push(c.numer().clone());
    }
    Some(IntPoly::new(out))
}

// ---------------------------------------------------------------------------
// Polynomials over F_p.
// ---------------------------------------------------------------------------

pub mod modp {
    //! Factorization of univariate polynomials modulo a prime
    //! (squarefree / distinct-degree / Cantor–Zassenhaus equal-degree).

    use num_integer::Integer;
    use num_traits::ToPrimitive;

    use super::IntPoly;
    use crate::Int;

    /// Monic-friendly dense polynomial over F_p, `p` a u64 prime.
    #[derive(Clone, PartialEq, Eq, Debug)]
    pub struct Poly {
        pub p: u64,
        /// ascending, no trailing zeros, entries in [0, p)
        pub coeffs: Vec<u64>,
    }

    fn addm(a: u64, b: u64, p: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % p as u128) as u64
    }

    fn subm(a: u64, b: u64, p: u64) -> u64 {
        (a as u128 + p as u128 - b as u128) as u64 % p
    }

    fn mulm(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1u64;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, a, p);
            }
            a = mulm(a, a, p);
            e >>= 1;
        }
        r
    }

    fn invm(a: u64, p: u64) -> u64 {
        powm(a, p - 2, p)
    }

    impl Poly {
        pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
            for c in &mut coeffs {
                *c %= p;
            }
            while coeffs.last() == Some(&0) {
                coeffs.pop();
            }
            Poly { p, coeffs }
        }

        pub fn from_int_poly(f: &IntPoly, p: u64) -> Self {
            let pi = Int::from(p);
            Poly::new(
                p,
                f.coeffs
                    .iter()
                    .map(|c| c.mod_floor(&pi).to_u64().unwrap())
                    .collect(),
            )
        }

        pub fn zero(p: u64) -> Self {
            Poly { p, coeffs: vec![] }
        }

        pub fn one(p: u64) -> Self {
            Poly {
                p,
                coeffs: vec![1],
            }
        }

        pub fn x(p: u64) -> Self {
            Poly {
                p,
                coeffs: vec![0, 1],
            }
        }

        pub fn is_zero(&self) -> bool {
            self.coeffs.is_empty()
        }

        pub fn deg(&self) -> usize {
            assert!(!self.is_zero());
            self.coeffs.len() - 1
        }

        pub fn is_constant(&self) -> bool {
            self.coeffs.len() <= 1
        }

        pub fn monic(&self) -> Self {
            if self.is_zero() {
                return self.clone();
            }
            let lc = *self.coeffs.last().unwrap();
            if lc == 1 {
                return self.clone();
            }
            let inv = invm(lc, self.p);
            Poly::new(
                self.p,
                self.coeffs.iter().map(|&c| mulm(c, inv, self.p)).collect(),
            )
        }

        pub fn add(&self, other: &Self) -> Self {
            let n = self.coeffs.len().max(other.coeffs.len());
            let mut v = vec![0u64; n];
            for (i, slot) in v.iter_mut().enumerate() {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                *slot = addm(a, b, self.p);
            }
            Poly::new(self.p, v)
        }

        pub fn sub(&self, other: &Self) -> Self {
            let n = self.coeffs.len().max(other.coeffs.len());
            let mut v = vec![0u64; n];
            for (i, slot) in v.iter_mut().enumerate() {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                *slot = subm(a, b, self.p);
            }
            Poly::new(self.p, v)
        }

        pub fn mul(&self, other: &Self) -> Self {
            if self.is_zero() || other.is_zero() {
                return Poly::zero(self.p);
            }
            let mut v = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    v[i + j] = addm(v[i + j], mulm(a, b, self.p), self.p);
                }
            }
            Poly::new(self.p, v)
        }

        pub fn rem(&self, d: &Self) -> Self {
            assert!(!d.is_zero());
            let p = self.p;
            let mut r = self.coeffs.clone();
            let dd = d.deg();
            let lcinv = invm(*d.coeffs.last().unwrap(), p);
            while r.len() > dd {
                let k = r.len() - 1 - dd;
                let q = mulm(*r.last().unwrap(), lcinv, p);
                if q != 0 {
                    for (j, &c) in d.coeffs.iter().enumerate() {
                        r[k + j] = subm(r[k + j], mulm(q, c, p), p);
                    }
                }
                while r.last() == Some(&0) {
                    r.pop();
                }
                if r.len() <= dd {
                    break;
                }
            }
            Poly::new(p, r)
        }

        pub fn div_exact(&self, d: &Self) -> Self {
            assert!(!d.is_zero());
            let p = self.p;
            if self.is_zero() {
                return Poly::zero(p);
            }
            let dd = d.deg();
            let mut r = self.coeffs.clone();
            let mut q = vec![0u64; self.deg().saturating_sub(dd) + 1];
            let lcinv = invm(*d.coeffs.last().unwrap(), p);
            for k in (0..q.len()).rev() {
                if r.len() == k + dd + 1 {
                    let c = mulm(*r.last().unwrap(), lcinv, p);
                    q[k] = c;
                    if c != 0 {
                        for (j, &dc) in d.coeffs.iter().enumerate() {
                            r[k + j] = subm(r[k + j], mulm(c, dc, p), p);
                        }
                    }
                    while r.last() == Some(&0) {
                        r.pop();
                    }
                }
            }
            assert!(r.is_empty(), "div_exact with nonzero remainder");
            Poly::new(p, q)
        }

        pub fn gcd(&self, other: &Self) -> Self {
            let mut a = self.clone();
            let mut b = other.clone();
            while !b.is_zero() {
                let r = a.rem(&b);
                a = b;
                b = r;
            }
            a.monic()
        }

        pub fn derivative(&self) -> Self {
            if self.coeffs.len() <= 1 {
                return Poly::zero(self.p);
            }
            let p = self.p;
            Poly::new(
                p,
                self.coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, &c)| mulm(c, (i as u64) % p, p))
                    .collect(),
            )
        }

        /// self^e mod m
        pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
            let mut base = self.rem(m);
            let mut acc = Poly::one(self.p);
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc.mul(&base).rem(m);
                }
                base = base.mul(&base).rem(m);
                e >>= 1;
            }
            acc
        }

        pub fn eval(&self, x: u64) -> u64 {
            let mut acc = 0u64;
            for &c in self.coeffs.iter().rev() {
                acc = addm(mulm(acc, x, self.p), c, self.p);
            }
            acc
        }
    }

    /// Deterministic xorshift for the equal-degree splitting.
    struct Rng(u64);

    impl Rng {
        fn next(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }
    }

    /// Full factorization of a nonzero polynomial mod p into monic
    /// irreducibles with multiplicities (leading coefficient dropped).
    pub fn factor(f: &Poly) -> Vec<(Poly, u32)> {
        assert!(!f.is_zero());
        let f = f.monic();
        if f.is_constant() {
            return vec![];
        }
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for (g, e) in squarefree_decomposition(&f) {
            for h in factor_squarefree(&g) {
                out.push((h, e));
            }
        }
        out.sort_by(|a, b| (a.0.deg(), &a.0.coeffs).cmp(&(b.0.deg(), &b.0.coeffs)));
        out
    }

    /// Yun-style squarefree decomposition valid in characteristic p
    /// (handles the f' = 0 case via p-th roots; Frobenius fixes F_p).
    fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
        let p = f.p;
        let mut out: Vec<(Poly, u32)> = Vec::new();
        let mut stack: Vec<(Poly, u32)> = vec![(f.clone(), 1)];
        while let Some((f, mult)) = stack.pop() {
            if f.is_constant() {
                continue;
            }
            let df = f.derivative();
            if df.is_zero() {
                // f = g(x^p); in F_p[x], the p-th root just divides exponents
                let mut root = Vec::new();
                for (i, &c) in f.coeffs.iter().enumerate() {
                    if i % (p as usize) == 0 {
                        root.push(c);
                    } else {
                        assert_eq!(c, 0, "derivative zero but not a p-th power");
                    }
                }
                stack.push((Poly::new(p, root), mult * p as u32));
                continue;
            }
            let mut c = f.gcd(&df);
            let mut w = f.div_exact(&c);
            let mut i = 1u32;
            while !w.is_constant() {
                let y = w.gcd(&c);
                let z = w.div_exact(&y);
                if !z.is_constant() {
                    out.push((z.monic(), i * mult));
                }
                w = y.clone();
                c = c.div_exact(&y);
                i += 1;
            }
            if !c.is_constant() {
                stack.push((c, mult * p as u32));
            }
        }
        out
    }

    fn factor_squarefree(f: &Poly) -> Vec<Poly> {
        let mut out = Vec::new();
        for (g, d) in distinct_degree(f) {
            equal_degree(&g, d, &mut out);
        }
        out
    }

    /// Split a squarefree monic f into products of irreducibles of equal
    /// degree: returns (product, degree) pairs.
    fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
        let p = f.p;
        let mut out = Vec::new();
        let mut f = f.clone();
        let mut h = Poly::x(p);
        let mut d = 0usize;
        while !f.is_constant() && f.deg() >= 2 * (d + 1) {
            d += 1;
            h = h.pow_mod(p as u128, &f);
            let g = h.sub(&Poly::x(p)).gcd(&f);
            if !g.is_constant() {
                out.push((g.clone(), d));
                f = f.div_exact(&g);
                h = h.rem(&f);
            }
        }
        if !f.is_constant() {
            let deg = f.deg();
            out.push((f, deg));
        }
        out
    }

    /// Cantor–Zassenhaus equal-degree splitting of f (product of distinct
    /// irreducibles of degree d).
    fn equal_degree(f: &Poly, d: usize, out: &mut Vec<Poly>) {
        let p = f.p;
        if f.deg() == d {
            out.push(f.monic());
            return;
        }
        let mut rng = Rng(0x9E3779B97F4A7C15 ^ (f.coeffs.iter().sum::<u64>().wrapping_mul(2654435761)));
        loop {
            // random polynomial of degree < deg f
            let mut coeffs = vec![0u64; f.deg()];
            for c in coeffs.iter_mut() {
                *c = rng.next() % p;
            }
            let r = Poly::new(p, coeffs);
            if r.is_zero() {
                continue;
            }
            let g0 = r.gcd(f);
            if !g0.is_constant() && g0.deg() < f.deg() {
                equal_degree(&g0, d, out);
                equal_degree(&f.div_exact(&g0), d, out);
                return;
            }
            let split = if p == 2 {
                // trace map over F_2: r + r^2 + r^4 + ... (2^(d-1) terms)
                let mut t = r.clone();
                let mut acc = r.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(f);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let e = (num_traits::pow::pow(p as u128, d) - 1) / 2;
                r.pow_mod(e, f).sub(&Poly::one(p))
            };
            let g = split.gcd(f);
            if !g.is_constant() && g.deg() < f.deg() {
                equal_degree(&g, d, out);
                equal_degree(&f.div_exact(&g), d, out);
                return;
            }
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;
        use crate::poly::IntPoly;

        #[test]
        fn factor_mod_2_cubic() {
            // x^3 + 2x - 1 = (x+1)(x^2+x+1) mod 2
            let f = Poly::from_int_poly(&IntPoly::from_i64(&[-1, 2, 0, 1]), 2);
            let fac = factor(&f);
            let degs: Vec<usize> = fac.iter().map(|(g, _)| g.deg()).collect();
            assert_eq!(degs, vec![1, 2]);
        }

        #[test]
        fn inert_mod_2() {
            // x^3 + x - 1 is irreducible mod 2
            let f = Poly::from_int_poly(&IntPoly::from_i64(&[-1, 1, 0, 1]), 2);
            let fac = factor(&f);
            assert_eq!(fac.len(), 1);
            assert_eq!(fac[0].0.deg(), 3);
            assert_eq!(fac[0].1, 1);
        }

        #[test]
        fn ramified_mod_31() {
            // 31 divides disc(x^3 + x - 1) = -31: repeated factor mod 31
            let f = Poly::from_int_poly(&IntPoly::from_i64(&[-1, 1, 0, 1]), 31);
            let fac = factor(&f);
            assert!(fac.iter().any(|(_, e)| *e >= 2));
            let total: usize = fac.iter().map(|(g, e)| g.deg() * *e as usize).sum();
            assert_eq!(total, 3);
        }

        #[test]
        fn splitting_reassembles() {
            for p in [2u64, 3, 5, 7, 13] {
                let f = Poly::from_int_poly(&IntPoly::from_i64(&[-2, 0, 0, 0, 1]), p); // x^4 - 2
                let fac = factor(&f);
                let mut prod = Poly::one(p);
                for (g, e) in &fac {
                    for _ in 0..*e {
                        prod = prod.mul(g);
                    }
                }
                assert_eq!(prod, f.monic());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    #[test]
    fn resultant_and_discriminant_cubics() {
        // disc(x^3 + px + q) = -4p^3 - 27q^2
        for (p, q) in [(1i64, -1i64), (2, -1), (5, -1), (-1, -1)] {
            let f = IntPoly::from_i64(&[q, p, 0, 1]);
            assert_eq!(f.discriminant(), Int::from(-4 * p * p * p - 27 * q * q));
        }
    }

    #[test]
    fn resultant_with_cyclotomic_matches_values() {
        // res(f, x - 1) = f(1) up to sign convention: Res(f,g) with g = x-1
        let f = IntPoly::from_i64(&[-1, 2, 0, 1]);
        let g = IntPoly::from_i64(&[-1, 1]);
        // Res(f, g) = lc(f)^deg g * lc(g)^deg f * prod over roots ... check |.|
        assert_eq!(f.resultant(&g).abs(), f.eval(&int(1)).abs());
    }

    #[test]
    fn gcd_of_multiple() {
        let f = IntPoly::from_i64(&[-1, 0, 1]); // x^2 - 1
        let g = IntPoly::from_i64(&[1, 1]); // x + 1
        assert_eq!(f.gcd(&g), g);
    }

    #[test]
    fn div_exact_detects_non_divisor() {
        let f = IntPoly::from_i64(&[-1, 0, 1]);
        let g = IntPoly::from_i64(&[1, 1]);
        assert_eq!(f.div_exact(&g), Some(IntPoly::from_i64(&[-1, 1])));
        let h = IntPoly::from_i64(&[2, 1]);
        assert_eq!(f.div_exact(&h), None);
    }

    #[test]
    fn irreducibility_family() {
        for m in 1..=10i64 {
            let f = IntPoly::from_i64(&[-1, m, 0, 1]);
            assert!(is_irreducible(&f).unwrap(), "T^3+{m}T-1 irreducible");
        }
        assert!(is_irreducible(&IntPoly::from_i64(&[-2, 0, 0, 0, 1])).unwrap()); // x^4-2
        assert!(!is_irreducible(&IntPoly::from_i64(&[-1, 0, 1])).unwrap()); // x^2-1
        assert!(!is_irreducible(&IntPoly::from_i64(&[1, 2, 1])).unwrap()); // (x+1)^2
        // x^4 + 4 = (x^2-2x+2)(x^2+2x+2): no rational roots, needs Kronecker
        assert!(!is_irreducible(&IntPoly::from_i64(&[4, 0, 0, 0, 1])).unwrap());
        // x^4 + 1 irreducible over Q but reducible mod every prime
        assert!(is_irreducible(&IntPoly::from_i64(&[1, 0, 0, 0, 1])).unwrap());
    }

    #[test]
    fn divisors_and_factor() {
        assert_eq!(
            divisors(&int(12)),
            vec![int(1), int(2), int(3), int(4), int(6), int(12)]
        );
        assert_eq!(factor_int(&int(360)), vec![(int(2), 3), (int(3), 2), (int(5), 1)]);
    }
}
