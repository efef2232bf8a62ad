//! Number fields with exact element arithmetic, certified embeddings,
//! norms, minimal polynomials and field automorphisms.
//!
//! Elements are coordinate vectors over a fixed integral basis (default:
//! the power basis). All predicates that start from numeric data (signs of
//! embeddings, root matching) end in an exact algebraic confirmation.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::{ComplexBox, RatInterval};
use crate::linalg::IntMatrix;
use crate::poly::{self, IntPoly};
use crate::roots;
use crate::{Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NonMonic,
    DegreeTooSmall,
    Reducible,
    /// Desk-scale irreducibility search ran out of budget.
    IrreducibilityBudget,
    MixedFields,
    ZeroElement,
    BadIntegralBasis(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NonMonic => write!(f, "defining polynomial must be monic"),
            FieldError::DegreeTooSmall => write!(f, "defining polynomial must have degree >= 2"),
            FieldError::Reducible => write!(f, "defining polynomial is reducible"),
            FieldError::IrreducibilityBudget => {
                write!(f, "irreducibility check exceeded its search budget")
            }
            FieldError::MixedFields => write!(f, "elements belong to different fields"),
            FieldError::ZeroElement => write!(f, "operation undefined for the zero element"),
            FieldError::BadIntegralBasis(s) => write!(f, "invalid integral basis: {s}"),
        }
    }
}

impl std::error::Error for FieldError {}

// ---------------------------------------------------------------------------
// Small rational-matrix helpers.
// ---------------------------------------------------------------------------

pub(crate) fn rmat_mul_vec(v: &[Rat], m: &[Vec<Rat>]) -> Vec<Rat> {
    let cols = m[0].len();
    let mut out = vec![Rat::zero(); cols];
    for (j, vj) in v.iter().enumerate() {
        if vj.is_zero() {
            continue;
        }
        for c in 0..cols {
            out[c] += vj * &m[j][c];
        }
    }
    out
}

/// Inverse of a square rational matrix by Gauss–Jordan; `None` if singular.
pub(crate) fn rmat_inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &p;
            inv[col][c] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
                let t = &factor * &inv[col][c];
                inv[r][c] -= t;
            }
        }
    }
    Some(inv)
}

/// Determinant of a rational matrix via scaling to integers.
pub(crate) fn rmat_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut lcm = Int::one();
    for row in m {
        for e in row {
            lcm = lcm.lcm(e.denom());
        }
    }
    let mut im = IntMatrix::zero(n, n);
    for (r, row) in m.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            *im.at_mut(r, c) = e.numer() * (&lcm / e.denom());
        }
    }
    let d = im.det();
    Rat::new(d, num_traits::pow::pow(lcm, n))
}

// ---------------------------------------------------------------------------
// The field object.
// ---------------------------------------------------------------------------

struct FieldInner {
    min_poly: IntPoly,
    degree: usize,
    real_places: usize,
    complex_places: usize,
    /// rows: integral-basis elements expressed over the power basis
    basis: Vec<Vec<Rat>>,
    basis_inv: Vec<Vec<Rat>>,
    power_basis: bool,
    /// discriminant of the order spanned by `basis`
    discriminant: Int,
    /// x^k mod f for k = 0..2n-2, integer coefficients (f monic)
    theta_power_table: Vec<Vec<Int>>,
    /// b_i * b_j in integral-basis coordinates (integral by ring closure)
    mult_tensor: Vec<Vec<Vec<Int>>>,
    embeddings: Mutex<Option<EmbeddingSet>>,
}

/// A number field Q[x]/(f) with a chosen integral basis. Cheap to clone.
#[derive(Clone)]
pub struct NumberField(Arc<FieldInner>);

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "NumberField(deg {}, sig ({},{}), f = {:?})",
            self.degree(),
            self.0.real_places,
            self.0.complex_places,
            self.0.min_poly
        )
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.min_poly == other.0.min_poly && self.0.basis == other.0.basis)
    }
}
impl Eq for NumberField {}

impl NumberField {
    /// Build a field from a monic irreducible integer polynomial, with an
    /// optional integral basis given over the power basis (rows are basis
    /// elements). The default is the power basis itself.
    pub fn new(min_poly: IntPoly, basis: Option<Vec<Vec<Rat>>>) -> Result<Self, FieldError> {
        if min_poly.is_zero() || !min_poly.is_monic() {
            return Err(FieldError::NonMonic);
        }
        let n = min_poly.deg();
        if n < 2 {
            return Err(FieldError::DegreeTooSmall);
        }
        match poly::is_irreducible(&min_poly) {
            Ok(true) => {}
            Ok(false) => return Err(FieldError::Reducible),
            Err(_) => return Err(FieldError::IrreducibilityBudget),
        }
        let s = roots::count_real_roots(&min_poly);
        debug_assert_eq!((n - s) % 2, 0);
        let t = (n - s) / 2;

        let power_basis = basis.is_none();
        let basis = basis.unwrap_or_else(|| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                        .collect()
                })
                .collect()
        });
        if basis.len() != n || basis.iter().any(|r| r.len() != n) {
            return Err(FieldError::BadIntegralBasis(format!(
                "expected a {n}x{n} matrix"
            )));
        }
        let det = rmat_det(&basis);
        if det.is_zero() {
            return Err(FieldError::BadIntegralBasis("singular basis".into()));
        }
        let basis_inv =
            rmat_inverse(&basis).ok_or_else(|| FieldError::BadIntegralBasis("singular".into()))?;

        // x^k mod f for k up to 2n-2
        let mut theta_power_table: Vec<Vec<Int>> = Vec::with_capacity(2 * n - 1);
        for k in 0..n {
            let mut row = vec![Int::zero(); n];
            row[k] = Int::one();
            theta_power_table.push(row);
        }
        for k in n..2 * n - 1 {
            let prev = theta_power_table[k - 1].clone();
            let mut row = vec![Int::zero(); n + 1];
            for (i, c) in prev.iter().enumerate() {
                row[i + 1] = c.clone();
            }
            let top = row[n].clone();
            if !top.is_zero() {
                for i in 0..n {
                    let t = &top * &min_poly.coeffs[i];
                    row[i] -= t;
                }
            }
            row.truncate(n);
            theta_power_table.push(row);
        }

        // discriminant of the order: disc(f) * det(basis)^2, must be integral
        let poly_disc = min_poly.discriminant();
        let disc_rat = Rat::from_integer(poly_disc) * &det * &det;
        if !disc_rat.denom().is_one() {
            return Err(FieldError::BadIntegralBasis(
                "discriminant of the spanned lattice is not an integer".into(),
            ));
        }
        let discriminant = disc_rat.numer().clone();

        let inner = FieldInner {
            min_poly,
            degree: n,
            real_places: s,
            complex_places: t,
            basis,
            basis_inv,
            power_basis,
            discriminant,
            theta_power_table,
            mult_tensor: Vec::new(),
            embeddings: Mutex::new(None),
        };
        let mut field = NumberField(Arc::new(inner));

        // multiplication tensor; integrality certifies ring closure
        let mut tensor: Vec<Vec<Vec<Int>>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut rows = Vec::with_capacity(n);
            for j in 0..n {
                let prod =
                    field.mul_power_coords(&field.0.basis[i].clone(), &field.0.basis[j].clone());
                let coords = rmat_mul_vec(&prod, &field.0.basis_inv);
                let mut int_row = Vec::with_capacity(n);
                for c in coords {
                    if !c.denom().is_one() {
                        return Err(FieldError::BadIntegralBasis(
                            "basis is not closed under multiplication".into(),
                        ));
                    }
                    int_row.push(c.numer().clone());
                }
                rows.push(int_row);
            }
            tensor.push(rows);
        }
        // 1 must lie in the lattice
        {
            let one_power: Vec<Rat> = std::iter::once(Rat::one())
                .chain(std::iter::repeat(Rat::zero()))
                .take(n)
                .collect();
            let coords = rmat_mul_vec(&one_power, &field.0.basis_inv);
            if coords.iter().any(|c| !c.denom().is_one()) {
                return Err(FieldError::BadIntegralBasis(
                    "basis lattice does not contain 1".into(),
                ));
            }
        }
        Arc::get_mut(&mut field.0).unwrap().mult_tensor = tensor;
        Ok(field)
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.0.min_poly
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// (number of real places, number of complex-conjugate pairs)
    pub fn signature(&self) -> (usize, usize) {
        (self.0.real_places, self.0.complex_places)
    }

    pub fn discriminant(&self) -> &Int {
        &self.0.discriminant
    }

    pub fn is_power_basis(&self) -> bool {
        self.0.power_basis
    }

    /// Integral basis rows over the power basis.
    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.0.basis
    }

    /// Coordinates (integral basis) of products of basis elements:
    /// `mult_tensor()[i][j]` holds the coordinates of `b_i * b_j`.
    pub fn mult_tensor(&self) -> &Vec<Vec<Vec<Int>>> {
        &self.0.mult_tensor
    }

    /// Index of Z[theta] inside the order (reciprocal of |det basis|).
    pub fn power_order_index(&self) -> Int {
        let det = rmat_det(&self.0.basis);
        let inv = (Rat::one() / det).abs();
        debug_assert!(inv.denom().is_one());
        inv.numer().clone()
    }

    pub fn element(&self, coords: Vec<Rat>) -> FieldElement {
        assert_eq!(coords.len(), self.degree(), "coordinate length mismatch");
        FieldElement {
            field: self.clone(),
            coords,
        }
    }

    pub fn element_from_int_coords(&self, coords: Vec<Int>) -> FieldElement {
        self.element(coords.into_iter().map(Rat::from_integer).collect())
    }

    /// Element from power-basis coordinates.
    pub fn element_from_power(&self, power: Vec<Rat>) -> FieldElement {
        assert_eq!(power.len(), self.degree());
        self.element(rmat_mul_vec(&power, &self.0.basis_inv))
    }

    pub fn zero(&self) -> FieldElement {
        self.element(vec![Rat::zero(); self.degree()])
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(Rat::one())
    }

    pub fn from_rational(&self, r: Rat) -> FieldElement {
        let mut p = vec![Rat::zero(); self.degree()];
        p[0] = r;
        self.element_from_power(p)
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        self.from_rational(Rat::from_integer(Int::from(v)))
    }

    /// The root of the defining polynomial as an element.
    pub fn theta(&self) -> FieldElement {
        let mut p = vec![Rat::zero(); self.degree()];
        p[1] = Rat::one();
        self.element_from_power(p)
    }

    /// Multiply two power-basis coordinate vectors modulo the defining
    /// polynomial.
    fn mul_power_coords(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = self.degree();
        let mut conv = vec![Rat::zero(); 2 * n - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                conv[i + j] += ai * bj;
            }
        }
        let mut out = vec![Rat::zero(); n];
        for (k, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, red) in self.0.theta_power_table[k].iter().enumerate() {
                if red.is_zero() {
                    continue;
                }
                out[i] += &c * Rat::from_integer(red.clone());
            }
        }
        out
    }

    /// Certified embedding boxes at (at least) the requested precision.
    pub fn embeddings(&self, request_bits: u32) -> EmbeddingSet {
        let bits = request_bits.max(32);
        let mut guard = self.0.embeddings.lock().unwrap();
        if let Some(e) = guard.as_ref() {
            if e.precision_bits >= bits {
                return e.clone();
            }
        }
        let boxes = roots::complex_roots(&self.0.min_poly, bits);
        let set = EmbeddingSet {
            real_count: self.0.real_places,
            complex_count: self.0.complex_places,
            theta_boxes: boxes,
            precision_bits: bits,
        };
        *guard = Some(set.clone());
        set
    }

    /// All field automorphisms, as exactly verified images of theta.
    /// Numeric root matching only proposes candidates; each is confirmed
    /// by evaluating the defining polynomial exactly. The identity is
    /// always present and the list is sorted deterministically.
    pub fn automorphisms(&self) -> Vec<Automorphism> {
        let n = self.degree();
        let (s, t) = self.signature();
        let emb = self.embeddings(160);
        // f64 midpoints: real roots, upper roots, then conjugates
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(n);
        for b in &emb.theta_boxes {
            pts.push((b.re.mid().to_f64().unwrap(), b.im.mid().to_f64().unwrap()));
        }
        for i in 0..t {
            let (re, im) = pts[s + i];
            pts.push((re, -im));
        }

        // denominators of integral images over the power basis divide the
        // index of Z[theta], and index^2 divides disc(f)
        let poly_disc = self.0.min_poly.discriminant().abs();
        let den_bound = poly_disc.sqrt().to_u64().unwrap_or(u64::MAX / 2) + 1;

        let mut found: Vec<Vec<Rat>> = Vec::new(); // power coords of images
        {
            let mut id = vec![Rat::zero(); n];
            id[1] = Rat::one();
            found.push(id);
        }
        for assign in root_assignments(s, t) {
            let mut target = vec![0usize; n];
            for i in 0..s {
                target[i] = assign.real_perm[i];
            }
            for j in 0..t {
                let (pair, conj) = assign.complex_targets[j];
                target[s + j] = if conj { s + t + pair } else { s + pair };
                target[s + t + j] = if conj { s + pair } else { s + t + pair };
            }
            if let Some(power) = solve_vandermonde_rational(&pts, &target, den_bound) {
                if found.iter().any(|f| *f == power) {
                    continue;
                }
                let alpha = self.element_from_power(power.clone());
                if self.eval_int_poly(&self.0.min_poly, &alpha).is_zero() {
                    found.push(power);
                }
            }
        }
        found.sort();
        found
            .into_iter()
            .map(|power| Automorphism::from_theta_image(self, self.element_from_power(power)))
            .collect()
    }

    /// Evaluate an integer polynomial at a field element.
    pub fn eval_int_poly(&self, f: &IntPoly, a: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        for c in f.coeffs.iter().rev() {
            acc = acc.mul(a);
            acc = acc.add(&self.from_rational(Rat::from_integer(c.clone())));
        }
        acc
    }

    /// Dedekind p-maximality of the order. For the power basis this is the
    /// classical criterion from the factorization of f mod p; for other
    /// bases the radical-ideal inversion check of the ideal layer decides.
    pub fn dedekind_p_maximal(&self, p: u64) -> bool {
        assert!(poly::is_prime_u64(p), "p must be prime");
        if !self.0.power_basis {
            return crate::ideal::p_maximal_via_radical(self, p);
        }
        let f = &self.0.min_poly;
        let fp = poly::modp::Poly::from_int_poly(f, p);
        let factors = poly::modp::factor(&fp);
        let mut g = poly::modp::Poly::one(p);
        let mut h = poly::modp::Poly::one(p);
        for (q, e) in &factors {
            g = g.mul(q);
            let mut qe = poly::modp::Poly::one(p);
            for _ in 1..*e {
                qe = qe.mul(q);
            }
            h = h.mul(&qe);
        }
        let g_lift = modp_lift(&g);
        let h_lift = modp_lift(&h);
        let gh = g_lift.mul(&h_lift);
        let diff = f.sub(&gh);
        let pi = Int::from(p);
        debug_assert!(diff.coeffs.iter().all(|c| c.mod_floor(&pi).is_zero()));
        let t_coeffs: Vec<Int> = diff.coeffs.iter().map(|c| c / &pi).collect();
        let t_bar = poly::modp::Poly::from_int_poly(&IntPoly::new(t_coeffs), p);
        if t_bar.is_zero() {
            return g.gcd(&h).is_constant();
        }
        t_bar.gcd(&g).gcd(&h).is_constant()
    }
}

fn modp_lift(g: &poly::modp::Poly) -> IntPoly {
    IntPoly::new(g.coeffs.iter().map(|&c| Int::from(c)).collect())
}

struct RootAssignment {
    real_perm: Vec<usize>,
    /// for each upper representative: (target pair index, conjugated?)
    complex_targets: Vec<(usize, bool)>,
}

fn root_assignments(s: usize, t: usize) -> Vec<RootAssignment> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for rest in perms(n - 1) {
            for pos in 0..n {
                let mut p = rest.clone();
                p.insert(pos, n - 1);
                out.push(p);
            }
        }
        out
    }
    let mut out = Vec::new();
    for real_perm in perms(s) {
        for pair_perm in perms(t) {
            for flags in 0..(1u32 << t) {
                let complex_targets = (0..t)
                    .map(|j| (pair_perm[j], flags & (1 << j) != 0))
                    .collect();
                out.push(RootAssignment {
                    real_perm: real_perm.clone(),
                    complex_targets,
                });
            }
        }
    }
    out
}

/// Solve sum_k c_k * r_i^k = r_{target(i)} over all embeddings i with a
/// complex f64 Gaussian elimination, then reconstruct rational coordinates.
fn solve_vandermonde_rational(
    pts: &[(f64, f64)],
    target: &[usize],
    den_bound: u64,
) -> Option<Vec<Rat>> {
    let n = pts.len();
    let mut m = vec![vec![(0f64, 0f64); n + 1]; n];
    for i in 0..n {
        let (re, im) = pts[i];
        let mut pw = (1f64, 0f64);
        for k in 0..n {
            m[i][k] = pw;
            pw = (pw.0 * re - pw.1 * im, pw.0 * im + pw.1 * re);
        }
        m[i][n] = pts[target[i]];
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| {
            let na = m[a][col].0.hypot(m[a][col].1);
            let nb = m[b][col].0.hypot(m[b][col].1);
            na.partial_cmp(&nb).unwrap()
        })?;
        if m[pivot][col].0.hypot(m[pivot][col].1) < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        let (pr, pi) = m[col][col];
        let pd = pr * pr + pi * pi;
        for c in col..=n {
            let (ar, ai) = m[col][c];
            m[col][c] = ((ar * pr + ai * pi) / pd, (ai * pr - ar * pi) / pd);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let (fr, fi) = m[r][col];
            if fr == 0.0 && fi == 0.0 {
                continue;
            }
            for c in col..=n {
                let (ar, ai) = m[col][c];
                m[r][c].0 -= fr * ar - fi * ai;
                m[r][c].1 -= fr * ai + fi * ar;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for r in 0..n {
        let (re, im) = m[r][n];
        if im.abs() > 1e-6 {
            return None;
        }
        out.push(reconstruct_rational(re, den_bound)?);
    }
    Some(out)
}

/// Continued-fraction rational reconstruction with bounded denominator.
fn reconstruct_rational(x: f64, max_den: u64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let mut a = x;
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, a.round() as i128, 1i128);
    let mut frac = a - a.round();
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() < 1e-9 {
            return Some(Rat::new(Int::from(p1), Int::from(q1)));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        a = 1.0 / frac;
        let ai = a.round();
        frac = a - ai;
        let p2 = ai as i128 * p1 + p0;
        let q2 = ai as i128 * q1 + q0;
        if q2.unsigned_abs() > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    let approx = p1 as f64 / q1 as f64;
    if q1 != 0 && (approx - x).abs() < 1e-9 {
        Some(Rat::new(Int::from(p1), Int::from(q1)))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Elements.
// ---------------------------------------------------------------------------

/// Element of a number field: exact coordinates over the integral basis.
#[derive(Clone)]
pub struct FieldElement {
    field: NumberField,
    coords: Vec<Rat>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}
impl Eq for FieldElement {}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn power_coords(&self) -> Vec<Rat> {
        rmat_mul_vec(&self.coords, &self.field.0.basis)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// Integral iff all coordinates over the integral basis are integers.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }

    pub fn integer_coords(&self) -> Option<Vec<Int>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coords.iter().map(|c| c.numer().clone()).collect())
    }

    pub fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.field.element(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        let pa = self.power_coords();
        let pb = other.power_coords();
        let prod = self.field.mul_power_coords(&pa, &pb);
        Ok(self.field.element_from_power(prod))
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.checked_add(other).expect("mixed fields")
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElement {
        self.field
            .element(self.coords.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.checked_mul(other).expect("mixed fields")
    }

    pub fn scale(&self, k: &Rat) -> FieldElement {
        self.field
            .element(self.coords.iter().map(|c| c * k).collect())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        let m = self.mult_matrix();
        let minv = rmat_inverse(&m)?;
        let one = self.field.one();
        Some(self.field.element(rmat_mul_vec(&one.coords, &minv)))
    }

    /// Integer power by repeated squaring (negative exponents via inverse).
    pub fn pow(&self, e: i64) -> FieldElement {
        if e < 0 {
            return self.inv().expect("negative power of zero element").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = self.field.one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Rows are the coordinates of `self * b_j` over the integral basis.
    pub fn mult_matrix(&self) -> Vec<Vec<Rat>> {
        let n = self.field.degree();
        let mut rows = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = vec![Rat::zero(); n];
            for (i, ci) in self.coords.iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                for (c, tv) in self.field.0.mult_tensor[i][j].iter().enumerate() {
                    if tv.is_zero() {
                        continue;
                    }
                    row[c] += ci * Rat::from_integer(tv.clone());
                }
            }
            rows.push(row);
        }
        rows
    }

    /// Field norm: determinant of the multiplication matrix.
    pub fn norm(&self) -> Rat {
        rmat_det(&self.mult_matrix())
    }

    pub fn trace(&self) -> Rat {
        let m = self.mult_matrix();
        let mut tr = Rat::zero();
        for (i, row) in m.iter().enumerate() {
            tr += &row[i];
        }
        tr
    }

    /// Exact minimal polynomial (monic for integral elements, primitive
    /// integer polynomial proportional to the monic one in general).
    pub fn min_poly(&self) -> IntPoly {
        let n = self.field.degree();
        let mut powers: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
        let mut acc = self.field.one();
        for _ in 0..=n {
            powers.push(acc.power_coords());
            acc = acc.mul(self);
        }
        for k in 1..=n {
            if let Some(sol) = solve_rational_system(&powers[..k], &powers[k]) {
                let mut coeffs: Vec<Rat> = sol.into_iter().map(|c| -c).collect();
                coeffs.push(Rat::one());
                let mut lcm = Int::one();
                for c in &coeffs {
                    lcm = lcm.lcm(c.denom());
                }
                let ints: Vec<Int> = coeffs
                    .iter()
                    .map(|c| c.numer() * (&lcm / c.denom()))
                    .collect();
                return IntPoly::new(ints).primitive();
            }
        }
        unreachable!("element of a degree-n field has minimal polynomial of degree <= n");
    }

    /// Whether all real embeddings are positive. Interval evaluation is
    /// refined until every sign is certified; errors on zero.
    pub fn is_totally_positive(&self) -> Result<bool, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.real_place_signs().iter().all(|&sgn| sgn > 0))
    }

    /// Certified signs at the real places (+1 or -1 entries).
    pub fn real_place_signs(&self) -> Vec<i32> {
        assert!(!self.is_zero());
        let (s, _) = self.field.signature();
        let mut bits = 64u32;
        loop {
            let emb = self.field.embeddings(bits);
            let mut signs = Vec::with_capacity(s);
            let mut undecided = false;
            for i in 0..s {
                match emb.eval_real(self, i).sign() {
                    Some(sg) => signs.push(sg),
                    None => {
                        undecided = true;
                        break;
                    }
                }
            }
            if !undecided {
                return signs;
            }
            bits *= 2;
            assert!(bits <= 1 << 20, "sign refinement failed to converge");
        }
    }
}

pub(crate) fn solve_rational_system(rows: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    // solve sum x_i rows[i] = target by Gaussian elimination
    let k = rows.len();
    let n = target.len();
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|c| {
            let mut row: Vec<Rat> = (0..k).map(|r| rows[r][c].clone()).collect();
            row.push(target[c].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r0 = 0usize;
    for col in 0..k {
        let pivot = (r0..n).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(r0, p);
        let pv = m[r0][col].clone();
        for c in col..=k {
            m[r0][c] /= &pv;
        }
        for r in 0..n {
            if r == r0 || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=k {
                let t = &f * &m[r0][c];
                m[r][c] -= t;
            }
        }
        pivot_rows.push((r0, col));
        r0 += 1;
    }
    for r in r0..n {
        if !m[r][k].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Rat::zero(); k];
    for (r, col) in pivot_rows {
        sol[col] = m[r][k].clone();
    }
    Some(sol)
}

// ---------------------------------------------------------------------------
// Embeddings.
// ---------------------------------------------------------------------------

/// Certified boxes for the images of theta under one representative of
/// every infinite place: first the real places (ascending), then the
/// complex places with positive imaginary part.
#[derive(Clone, Debug)]
pub struct EmbeddingSet {
    real_count: usize,
    complex_count: usize,
    pub theta_boxes: Vec<ComplexBox>,
    pub precision_bits: u32,
}

impl EmbeddingSet {
    pub fn places(&self) -> usize {
        self.real_count + self.complex_count
    }

    pub fn real_places(&self) -> usize {
        self.real_count
    }

    /// Box for the image of an element at place `i`.
    pub fn eval(&self, a: &FieldElement, i: usize) -> ComplexBox {
        let power = a.power_coords();
        let b = &self.theta_boxes[i];
        let mut acc = ComplexBox::point(Rat::zero(), Rat::zero());
        for c in power.iter().rev() {
            acc = acc.mul(b);
            acc.re = acc.re.add(&RatInterval::point(c.clone()));
        }
        acc
    }

    /// Real interval for a real place (`i < s`).
    pub fn eval_real(&self, a: &FieldElement, i: usize) -> RatInterval {
        assert!(i < self.real_count, "not a real place");
        self.eval(a, i).re
    }
}

// ---------------------------------------------------------------------------
// Automorphisms.
// ---------------------------------------------------------------------------

/// Field automorphism: the exact image of theta plus the induced linear
/// map on integral-basis coordinates.
#[derive(Clone)]
pub struct Automorphism {
    image: FieldElement,
    /// rows: coordinates of g(b_j)
    coord_map: Vec<Vec<Rat>>,
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Automorphism(theta -> {:?})", self.image)
    }
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
    }
}
impl Eq for Automorphism {}

impl Automorphism {
    fn from_theta_image(field: &NumberField, image: FieldElement) -> Self {
        let n = field.degree();
        let mut img_powers: Vec<Vec<Rat>> = Vec::with_capacity(n);
        let mut acc = field.one();
        for _ in 0..n {
            img_powers.push(acc.power_coords());
            acc = acc.mul(&image);
        }
        let mut coord_map = Vec::with_capacity(n);
        for j in 0..n {
            let bj = &field.0.basis[j];
            let mut gp = vec![Rat::zero(); n];
            for (k, c) in bj.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (idx, v) in img_powers[k].iter().enumerate() {
                    gp[idx] += c * v;
                }
            }
            coord_map.push(rmat_mul_vec(&gp, &field.0.basis_inv));
        }
        Automorphism { image, coord_map }
    }

    pub fn theta_image(&self) -> &FieldElement {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        let field = &self.image.field;
        self.image == field.theta()
    }

    pub fn apply(&self, a: &FieldElement) -> FieldElement {
        assert!(a.field == self.image.field, "mixed fields");
        a.field.element(rmat_mul_vec(&a.coords, &self.coord_map))
    }

    /// Composite `then(self(.))`.
    pub fn compose(&self, then: &Automorphism) -> Automorphism {
        Automorphism::from_theta_image(&self.image.field, then.apply(&self.image))
    }

    pub fn inverse(&self) -> Automorphism {
        let field = &self.image.field;
        for g in field.automorphisms() {
            if g.apply(&self.image) == field.theta() {
                return g;
            }
        }
        unreachable!("automorphism group is closed under inverses");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn cubic(m: i64) -> NumberField {
        NumberField::new(IntPoly::from_i64(&[-1, m, 0, 1]), None).unwrap()
    }

    #[test]
    fn build_field_signatures_and_discriminants() {
        let k1 = cubic(1);
        assert_eq!(k1.signature(), (1, 1));
        assert_eq!(*k1.discriminant(), int(-31));
        let k2 = cubic(2);
        assert_eq!(k2.signature(), (1, 1));
        assert_eq!(*k2.discriminant(), int(-59));
        let k3 = NumberField::new(IntPoly::from_i64(&[-2, 0, 0, 0, 1]), None).unwrap();
        assert_eq!(k3.signature(), (2, 1));
    }

    #[test]
    fn build_field_rejects_bad_input() {
        assert!(matches!(
            NumberField::new(IntPoly::from_i64(&[-1, 0, 1]), None).map(|_| ()),
            Err(FieldError::Reducible)
        ));
        assert!(matches!(
            NumberField::new(IntPoly::from_i64(&[1, 0, 2]), None).map(|_| ()),
            Err(FieldError::NonMonic)
        ));
    }

    #[test]
    fn element_arithmetic_reduces_by_min_poly() {
        // theta^3 = 1 - theta in x^3 + x - 1
        let k = cubic(1);
        let th = k.theta();
        assert_eq!(th.pow(3), k.one().sub(&th));
        // a * 1 = a
        let a = k.element(vec![rat(3), rat(-2), rat(5)]);
        assert_eq!(a.mul(&k.one()), a);
        // theta^4 = theta - 2 theta^2 in x^3 + 2x - 1
        let k2 = cubic(2);
        let th2 = k2.theta();
        assert_eq!(th2.pow(4), th2.sub(&th2.mul(&th2).scale(&rat(2))));
    }

    #[test]
    fn norms() {
        let k = cubic(1);
        assert_eq!(k.theta().norm(), rat(1));
        let k2 = cubic(2);
        assert_eq!(k2.one().sub(&k2.theta()).norm(), rat(2));
        assert_eq!(k2.from_int(2).norm(), rat(8));
    }

    #[test]
    fn norm_multiplicative() {
        let k = cubic(2);
        let a = k.element(vec![rat(1), rat(2), rat(-1)]);
        let b = k.element(vec![rat(0), rat(3), rat(1)]);
        assert_eq!(a.mul(&b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn embeddings_match_known_roots() {
        let k = cubic(1);
        let e = k.embeddings(64);
        let mid = e.theta_boxes[0].re.mid().to_f64().unwrap();
        assert!((mid - 0.6823278).abs() < 1e-5);
        let m2 = e.theta_boxes[1].abs_square();
        assert!((m2.mid().to_f64().unwrap() - 1.2106f64.powi(2)).abs() < 1e-3);
    }

    #[test]
    fn totally_positive() {
        let k = cubic(1);
        let th = k.theta();
        assert!(th.is_totally_positive().unwrap());
        assert!(!th.neg().is_totally_positive().unwrap());
        assert!(k.one().sub(&th).is_totally_positive().unwrap());
        assert!(k.zero().is_totally_positive().is_err());
    }

    #[test]
    fn automorphisms_cubic_trivial() {
        let auts = cubic(1).automorphisms();
        assert_eq!(auts.len(), 1);
        assert!(auts[0].is_identity());
    }

    #[test]
    fn automorphisms_of_quartic_and_quadratic() {
        let k = NumberField::new(IntPoly::from_i64(&[-2, 0, 0, 0, 1]), None).unwrap();
        let auts = k.automorphisms();
        assert_eq!(auts.len(), 2);
        let th = k.theta();
        assert!(auts.iter().any(|g| g.apply(&th) == th.neg()));

        let q = NumberField::new(IntPoly::from_i64(&[-2, 0, 1]), None).unwrap();
        assert_eq!(q.automorphisms().len(), 2);
    }

    #[test]
    fn automorphism_is_ring_map() {
        let k = NumberField::new(IntPoly::from_i64(&[-2, 0, 0, 0, 1]), None).unwrap();
        let g = k
            .automorphisms()
            .into_iter()
            .find(|g| !g.is_identity())
            .unwrap();
        let a = k.element(vec![rat(1), rat(2), rat(0), rat(-1)]);
        let b = k.element(vec![rat(3), rat(0), rat(1), rat(1)]);
        assert_eq!(g.apply(&a.mul(&b)), g.apply(&a).mul(&g.apply(&b)));
        assert_eq!(g.apply(&a.add(&b)), g.apply(&a).add(&g.apply(&b)));
        assert_eq!(g.apply(&k.from_int(7)), k.from_int(7));
    }

    #[test]
    fn min_poly_of_elements() {
        let k = cubic(1);
        assert_eq!(k.theta().min_poly(), IntPoly::from_i64(&[-1, 1, 0, 1]));
        assert_eq!(k.from_int(5).min_poly(), IntPoly::from_i64(&[-5, 1]));
        // 3 + 2 theta^2 in x^4 - 2 is 3 + 2 sqrt 2, min poly x^2 - 6x + 1
        let k4 = NumberField::new(IntPoly::from_i64(&[-2, 0, 0, 0, 1]), None).unwrap();
        let a = k4.from_int(3).add(&k4.theta().pow(2).scale(&rat(2)));
        assert_eq!(a.min_poly(), IntPoly::from_i64(&[1, -6, 1]));
    }

    #[test]
    fn dedekind_maximality() {
        assert!(cubic(1).dedekind_p_maximal(31));
        assert!(cubic(2).dedekind_p_maximal(59));
        let q = NumberField::new(IntPoly::from_i64(&[3, 0, 1]), None).unwrap();
        // disc(x^2+3) = -12 but disc(Q(sqrt-3)) = -3: Z[theta] not 2-maximal
        assert!(!q.dedekind_p_maximal(2));
        assert!(q.dedekind_p_maximal(3));
    }

    #[test]
    fn inverse_and_pow_negative() {
        let k = cubic(2);
        let th = k.theta();
        let inv = th.inv().unwrap();
        assert!(th.mul(&inv).is_one());
        assert_eq!(th.pow(-3), inv.pow(3));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = cubic(1).theta();
        let b = cubic(2).theta();
        assert!(matches!(a.checked_mul(&b), Err(FieldError::MixedFields)));
        assert!(matches!(a.checked_add(&b), Err(FieldError::MixedFields)));
    }

    #[test]
    fn trace_of_theta() {
        assert_eq!(cubic(1).theta().trace(), rat(0));
    }

    #[test]
    fn non_power_basis_field() {
        // Q(sqrt 5) with the maximal order basis {1, (1+theta)/2}
        let f = IntPoly::from_i64(&[-5, 0, 1]);
        let basis = vec![
            vec![rat(1), rat(0)],
            vec![Rat::new(int(1), int(2)), Rat::new(int(1), int(2))],
        ];
        let k = NumberField::new(f, Some(basis)).unwrap();
        assert_eq!(*k.discriminant(), int(5));
        assert_eq!(k.power_order_index(), int(2));
        // the golden ratio is integral there
        let phi = k.element(vec![rat(0), rat(1)]);
        assert!(phi.is_integral());
        assert_eq!(phi.norm(), rat(-1));
        assert_eq!(phi.min_poly(), IntPoly::from_i64(&[-1, -1, 1]));
    }
}
