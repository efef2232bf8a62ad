//! Certified root isolation.
//!
//! Real roots are isolated by Sturm sequences and refined by bisection, so
//! their enclosures are exact rational intervals. Non-real roots are seeded
//! numerically (Durand–Kerner) and then certified a posteriori: for any
//! point z, `min_i |z - r_i| <= n * |f(z)/f'(z)|`, and the right-hand side
//! is evaluated in exact rational arithmetic. Disjointness of the resulting
//! boxes plus the total root count pins exactly one root per box.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::{ComplexBox, RatInterval};
use crate::poly::IntPoly;
use crate::{Int, Rat};

// ---------------------------------------------------------------------------
// Sturm machinery over the rationals.
// ---------------------------------------------------------------------------

type RatPoly = Vec<Rat>; // ascending, normalized

fn rp_from_int(f: &IntPoly) -> RatPoly {
    f.coeffs
        .iter()
        .map(|c| Rat::from_integer(c.clone()))
        .collect()
}

fn rp_normalize(v: &mut RatPoly) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn rp_eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn rp_rem(a: &[Rat], b: &[Rat]) -> RatPoly {
    assert!(!b.is_empty());
    let mut r: RatPoly = a.to_vec();
    rp_normalize(&mut r);
    let db = b.len() - 1;
    let lcb = b.last().unwrap();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let q = r.last().unwrap() / lcb;
        for (j, c) in b.iter().enumerate() {
            let t = &q * c;
            r[k + j] -= t;
        }
        rp_normalize(&mut r);
        if r.len() <= db {
            break;
        }
    }
    r
}

fn sturm_chain(f: &IntPoly) -> Vec<RatPoly> {
    let mut chain = Vec::new();
    let mut a = rp_from_int(f);
    rp_normalize(&mut a);
    let mut b = rp_from_int(&f.derivative());
    rp_normalize(&mut b);
    chain.push(a.clone());
    while !b.is_empty() {
        chain.push(b.clone());
        let mut r = rp_rem(&a, &b);
        for c in &mut r {
            *c = -c.clone();
        }
        a = b;
        b = r;
    }
    chain
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut last: Option<i8> = None;
    for s in signs {
        if s == 0 {
            continue;
        }
        if let Some(l) = last {
            if l != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

fn sign_rat(v: &Rat) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn variations_at(chain: &[RatPoly], x: &Rat) -> usize {
    variations(chain.iter().map(|p| sign_rat(&rp_eval(p, x))))
}

fn variations_at_inf(chain: &[RatPoly], positive: bool) -> usize {
    variations(chain.iter().map(|p| {
        match p.last() {
            None => 0,
            Some(lc) => {
                let deg = p.len() - 1;
                let mut s = sign_rat(lc);
                if !positive && deg % 2 == 1 {
                    s = -s;
                }
                s
            }
        }
    }))
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(f: &IntPoly) -> usize {
    let chain = sturm_chain(f);
    variations_at_inf(&chain, false) - variations_at_inf(&chain, true)
}

/// Number of distinct real roots in the half-open interval (a, b].
pub fn count_real_roots_in(f: &IntPoly, a: &Rat, b: &Rat) -> usize {
    let chain = sturm_chain(f);
    variations_at(&chain, a) - variations_at(&chain, b)
}

/// Isolating intervals for all real roots of a squarefree polynomial.
/// Each returned interval either has `lo == hi` (exact rational root) or
/// satisfies `f(lo) * f(hi) < 0` with exactly one root inside.
pub fn isolate_real_roots(f: &IntPoly) -> Vec<RatInterval> {
    assert!(f.is_squarefree(), "real root isolation expects squarefree input");
    if f.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let chain = sturm_chain(f);
    let bound = f.root_bound();
    let big = Rat::from_integer(bound.ceil().numer().clone()) + Rat::one();
    let lo = -big.clone();
    let total = variations_at(&chain, &lo) - variations_at(&chain, &big);
    let mut out = Vec::new();
    let mut stack = vec![(lo, big, total)];
    while let Some((a, b, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let two = Rat::from_integer(Int::from(2));
                let mut mid = (&a + &b) / &two;
                // avoid splitting exactly at a root of f
                let mut k = 3u32;
                while rp_eval(&chain[0], &mid).is_zero() {
                    if k > 80 {
                        // extremely unlikely; mid is a root, isolate it as a point
                        break;
                    }
                    mid = &mid + (&b - &a) / Rat::from_integer(Int::one() << k as usize);
                    k += 1;
                }
                if rp_eval(&chain[0], &mid).is_zero() {
                    out.push((mid.clone(), mid.clone()));
                    // recount on remaining halves is handled by variations below
                }
                let va = variations_at(&chain, &a);
                let vm = variations_at(&chain, &mid);
                let vb = variations_at(&chain, &b);
                if va > vm {
                    stack.push((a, mid.clone(), va - vm));
                }
                if vm > vb {
                    stack.push((mid, b, vm - vb));
                }
            }
        }
    }
    let mut iv: Vec<RatInterval> = out
        .into_iter()
        .map(|(a, b)| {
            if a == b {
                RatInterval::point(a)
            } else if f.eval_rat(&b).is_zero() {
                RatInterval::point(b)
            } else {
                RatInterval::new(a, b)
            }
        })
        .collect();
    iv.sort_by(|x, y| x.lo.cmp(&y.lo));
    iv
}

/// Shrink an isolating interval for a simple root by bisection until its
/// width is at most `target`.
pub fn refine_real_root(f: &IntPoly, iv: &RatInterval, target: &Rat) -> RatInterval {
    if iv.lo == iv.hi {
        return iv.clone();
    }
    let mut a = iv.lo.clone();
    let mut b = iv.hi.clone();
    let mut fa = f.eval_rat(&a);
    if fa.is_zero() {
        return RatInterval::point(a);
    }
    let fb = f.eval_rat(&b);
    if fb.is_zero() {
        return RatInterval::point(b);
    }
    assert!(
        fa.is_positive() != fb.is_positive(),
        "isolating interval without sign change"
    );
    let two = Rat::from_integer(Int::from(2));
    while &b - &a > *target {
        let mid = (&a + &b) / &two;
        let fm = f.eval_rat(&mid);
        if fm.is_zero() {
            return RatInterval::point(mid);
        }
        if fm.is_positive() == fa.is_positive() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    RatInterval::new(a, b)
}

// ---------------------------------------------------------------------------
// Complex seeds and exact certification.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    fn norm(self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt()
    }
}

fn eval_c64(coeffs: &[f64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc.mul(z).add(C64::new(c, 0.0));
    }
    acc
}

/// Durand–Kerner approximation of all roots.
fn durand_kerner(f: &IntPoly, iters: usize) -> Vec<C64> {
    let n = f.deg();
    let lc = f.leading().to_f64().unwrap();
    let coeffs: Vec<f64> = f.coeffs.iter().map(|c| c.to_f64().unwrap() / lc).collect();
    let bound = f.root_bound().to_f64().unwrap();
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = Vec::with_capacity(n);
    let mut acc = C64::new(bound.min(1.5), 0.0);
    for _ in 0..n {
        acc = acc.mul(seed);
        z.push(acc);
    }
    for _ in 0..iters {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom = denom.mul(z[i].sub(z[j]));
                }
            }
            let delta = eval_c64(&coeffs, z[i]).div(denom);
            z[i] = z[i].sub(delta);
            moved = moved.max(delta.norm());
        }
        if moved < 1e-14 * bound.max(1.0) {
            break;
        }
    }
    z
}

/// Exact complex rational arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    fn from_c64_dyadic(z: C64, bits: u32) -> Self {
        CRat {
            re: f64_to_dyadic(z.re, bits),
            im: f64_to_dyadic(z.im, bits),
        }
    }

    fn add(&self, o: &CRat) -> CRat {
        CRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn sub(&self, o: &CRat) -> CRat {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul(&self, o: &CRat) -> CRat {
        CRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    fn div(&self, o: &CRat) -> CRat {
        let d = &o.re * &o.re + &o.im * &o.im;
        CRat::new(
            (&self.re * &o.re + &self.im * &o.im) / &d,
            (&self.im * &o.re - &self.re * &o.im) / &d,
        )
    }

    fn eval_poly(&self, f: &IntPoly) -> CRat {
        let mut acc = CRat::new(Rat::zero(), Rat::zero());
        for c in f.coeffs.iter().rev() {
            acc = acc.mul(self);
            acc.re += Rat::from_integer(c.clone());
        }
        acc
    }

    fn round_dyadic(&self, bits: u32) -> CRat {
        CRat::new(rat_to_dyadic(&self.re, bits), rat_to_dyadic(&self.im, bits))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

fn f64_to_dyadic(x: f64, bits: u32) -> Rat {
    let scale = (1u64 << 40) as f64;
    let _ = bits;
    let n = (x * scale).round() as i64;
    Rat::new(Int::from(n), Int::from(1u64 << 40))
}

fn rat_to_dyadic(x: &Rat, bits: u32) -> Rat {
    let denom = Int::one() << bits as usize;
    let scaled = (x * Rat::from_integer(denom.clone())).round();
    Rat::new(scaled.numer().clone(), denom)
}

/// Upper bound for `n * |f(z)| / |f'(z)|` (a radius guaranteed to reach the
/// nearest root of `f`), exact rational arithmetic throughout.
fn root_distance_bound(f: &IntPoly, df: &IntPoly, z: &CRat) -> Option<Rat> {
    let fv = z.eval_poly(f);
    let dv = z.eval_poly(df);
    let dv_low = dv.re.abs().max(dv.im.abs()); // lower bound for |f'(z)| via max <= euclidean
    if dv_low.is_zero() {
        return None;
    }
    let fv_high = fv.re.abs() + fv.im.abs(); // upper bound for |f(z)|
    Some(Rat::from_integer(Int::from(f.deg() as u64)) * fv_high / dv_low)
}

/// Certified boxes for the non-real roots of a squarefree polynomial with
/// strictly positive imaginary part (one representative per conjugate pair),
/// each of radius at most `2^-bits`.
fn certified_upper_boxes(f: &IntPoly, t: usize, bits: u32) -> Option<Vec<ComplexBox>> {
    if t == 0 {
        return Some(vec![]);
    }
    let df = f.derivative();
    for attempt in 0..3 {
        let iters = 600 * (1 << attempt);
        let mut approx = durand_kerner(f, iters);
        approx.sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap());
        let seeds: Vec<C64> = approx.into_iter().take(t).collect();
        if seeds.iter().any(|z| z.im <= 0.0) {
            continue;
        }
        let mut boxes = Vec::with_capacity(t);
        let mut ok = true;
        for seed in seeds {
            match newton_certify(f, &df, seed, bits) {
                Some(b) if b.im_positive() => boxes.push(b),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // pairwise disjoint (conjugate mirrors are disjoint automatically
        // because every box has certified positive imaginary part)
        let mut disjoint = true;
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if !boxes[i].is_disjoint(&boxes[j]) {
                    disjoint = false;
                }
            }
        }
        if disjoint {
            boxes.sort_by(|a, b| (a.re.lo.clone(), a.im.lo.clone()).cmp(&(b.re.lo.clone(), b.im.lo.clone())));
            return Some(boxes);
        }
    }
    None
}

fn newton_certify(f: &IntPoly, df: &IntPoly, seed: C64, bits: u32) -> Option<ComplexBox> {
    let target = Rat::new(Int::one(), Int::one() << bits as usize);
    let mut z = CRat::from_c64_dyadic(seed, 60);
    let mut prec: u32 = 120;
    for _ in 0..64 {
        let rho = root_distance_bound(f, df, &z)?;
        if rho <= target {
            let rho_iv = RatInterval::new(-rho.clone(), rho.clone());
            return Some(ComplexBox::new(
                RatInterval::point(z.re.clone()).add(&rho_iv),
                RatInterval::point(z.im.clone()).add(&rho_iv),
            ));
        }
        let fv = z.eval_poly(f);
        let dv = z.eval_poly(df);
        if dv.is_zero() {
            return None;
        }
        z = z.sub(&fv.div(&dv)).round_dyadic(prec);
        prec = (prec * 2).min(100_000);
    }
    None
}

/// All roots of a squarefree polynomial as certified disjoint boxes:
/// first the real roots ascending (imaginary part exactly 0), then one
/// box per complex-conjugate pair with certified positive imaginary part.
/// Every box has width at most `2^-bits`.
pub fn complex_roots(f: &IntPoly, bits: u32) -> Vec<ComplexBox> {
    assert!(f.is_squarefree(), "root boxes need a squarefree polynomial");
    let n = f.deg();
    let mut bits = bits.max(32);
    loop {
        let target = Rat::new(Int::one(), Int::one() << bits as usize);
        let real = isolate_real_roots(f);
        let s = real.len();
        assert_eq!((n - s) % 2, 0, "non-real roots come in conjugate pairs");
        let t = (n - s) / 2;
        let mut boxes: Vec<ComplexBox> = real
            .iter()
            .map(|iv| ComplexBox::new(refine_real_root(f, iv, &target), RatInterval::zero()))
            .collect();
        let upper = match certified_upper_boxes(f, t, bits) {
            Some(u) => u,
            None => {
                bits += 32;
                continue;
            }
        };
        boxes.extend(upper);
        // real boxes must be pairwise disjoint after refinement
        let mut all_disjoint = true;
        for i in 0..s {
            for j in i + 1..s {
                if !boxes[i].re.is_disjoint(&boxes[j].re) {
                    all_disjoint = false;
                }
            }
        }
        if all_disjoint {
            return boxes;
        }
        bits += 16;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    #[test]
    fn count_real_roots_examples() {
        assert_eq!(count_real_roots(&IntPoly::from_i64(&[-1, 1, 0, 1])), 1); // x^3+x-1
        assert_eq!(count_real_roots(&IntPoly::from_i64(&[-2, 0, 1])), 2); // x^2-2
        assert_eq!(count_real_roots(&IntPoly::from_i64(&[-2, 0, 0, 0, 1])), 2); // x^4-2
        assert_eq!(count_real_roots(&IntPoly::from_i64(&[3, 0, 1])), 0); // x^2+3
    }

    #[test]
    fn isolate_sqrt2() {
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 2);
        let target = Rat::new(int(1), int(1) << 40);
        let r = refine_real_root(&f, &roots[1], &target);
        // sqrt(2) = 1.41421356...
        assert!(r.lo > rat(14142) / rat(10000));
        assert!(r.hi < rat(14143) / rat(10000));
    }

    #[test]
    fn exact_rational_roots_become_points() {
        // x^2 - 1: roots exactly +-1
        let f = IntPoly::from_i64(&[-1, 0, 1]);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 2);
        for iv in &roots {
            let refined = refine_real_root(&f, iv, &Rat::new(int(1), int(1024)));
            assert!(f.eval_rat(&refined.lo).is_zero() || refined.width() <= Rat::new(int(1), int(1024)));
        }
    }

    #[test]
    fn complex_roots_of_cubic() {
        // x^3 + x - 1: one real ~0.6823, pair with |z|^2 ~ 1.4656
        let f = IntPoly::from_i64(&[-1, 1, 0, 1]);
        let boxes = complex_roots(&f, 60);
        assert_eq!(boxes.len(), 2);
        assert!(boxes[0].im == RatInterval::zero());
        assert!(boxes[0].re.contains(&(rat(6823) / rat(10000))) || boxes[0].re.width() < rat(1) / rat(1000));
        let m2 = boxes[1].abs_square();
        let v = 1.4655712318767682f64; // 1/real root = |z|^2, since product of roots = 1
        assert!((m2.mid().to_f64().unwrap() - v).abs() < 1e-9);
        assert!(m2.width().to_f64().unwrap() < 1e-12);
    }

    #[test]
    fn complex_roots_of_quartic() {
        let f = IntPoly::from_i64(&[-2, 0, 0, 0, 1]);
        let boxes = complex_roots(&f, 50);
        assert_eq!(boxes.len(), 3); // two real, one pair
        assert!(boxes[2].im_positive());
        // complex pair of x^4-2 is +- i*2^(1/4)
        assert!(boxes[2].re.contains_zero());
    }

    #[test]
    fn roots_of_unity_boxes() {
        let f = IntPoly::x_pow_minus(5, Int::one()); // x^5 - 1
        let boxes = complex_roots(&f, 60);
        assert_eq!(boxes.len(), 3);
        for b in &boxes {
            let m2 = b.abs_square();
            assert!(m2.contains(&rat(1)));
        }
    }
}
