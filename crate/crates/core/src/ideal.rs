//! Integral and fractional ideals of the ring of integers, represented as
//! full-rank lattices in Hermite normal form over the integral basis.
//!
//! Quotient structure, residue-ring unit groups (with discrete-log tables
//! under an enumeration cap), Dedekind prime splitting, and the fractional
//! inverse with its built-in maximality guard `I * (O:I) = O`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{self, hnf, snf, IntMatrix};
use crate::numfield::{FieldElement, NumberField};
use crate::poly::{self, IntPoly};
use crate::{Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealError {
    ZeroIdeal,
    NonIntegralGenerator,
    MixedFields,
    /// Inversion failed: the supplied order is not maximal at some prime
    /// dividing the ideal.
    NonInvertible,
    /// Residue enumeration would exceed the configured cap and no
    /// alternative path applies.
    CapExceeded,
    /// A prime divides the index of the power order; the splitting path
    /// does not apply.
    IndexDivisor(u64),
    /// The enumeration and Euler-phi paths disagreed; this signals an
    /// internal bug and is never ignored.
    OracleDisagreement,
}

impl fmt::Display for IdealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealError::ZeroIdeal => write!(f, "all generators are zero"),
            IdealError::NonIntegralGenerator => write!(f, "generator is not integral"),
            IdealError::MixedFields => write!(f, "ideals belong to different fields"),
            IdealError::NonInvertible => {
                write!(f, "ideal is not invertible (order not maximal here)")
            }
            IdealError::CapExceeded => write!(f, "residue enumeration cap exceeded"),
            IdealError::IndexDivisor(p) => {
                write!(f, "prime {p} divides the index of the power order")
            }
            IdealError::OracleDisagreement => {
                write!(f, "independent residue-unit counts disagree (internal bug)")
            }
        }
    }
}

impl std::error::Error for IdealError {}

/// Default cap on residue enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Multiply two integral coordinate vectors using the field's integer
/// multiplication tensor.
pub(crate) fn mul_int_coords(field: &NumberField, x: &[Int], y: &[Int]) -> Vec<Int> {
    let n = field.degree();
    let tensor = field.mult_tensor();
    let mut out = vec![Int::zero(); n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let coef = xi * yj;
            for (c, t) in tensor[i][j].iter().enumerate() {
                if !t.is_zero() {
                    out[c] += &coef * t;
                }
            }
        }
    }
    out
}

/// Nonzero ideal of the ring of integers: full-rank HNF lattice basis,
/// rows relative to the integral basis.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerIdeal {
    field: NumberField,
    basis: IntMatrix,
}

impl fmt::Debug for IntegerIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerIdeal(norm {}, basis {:?})", self.norm(), self.basis)
    }
}

impl IntegerIdeal {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// HNF lattice basis (rows over the integral basis).
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn whole_ring(field: &NumberField) -> Self {
        IntegerIdeal {
            field: field.clone(),
            basis: IntMatrix::identity(field.degree()),
        }
    }

    fn from_lattice_rows(field: &NumberField, rows: Vec<Vec<Int>>) -> Result<Self, IdealError> {
        let n = field.degree();
        let stacked = IntMatrix::from_rows(rows);
        let (h, _) = hnf(&stacked);
        let mut top = Vec::with_capacity(n);
        for r in 0..n.min(h.rows) {
            top.push(h.row(r).to_vec());
        }
        let basis = IntMatrix::from_rows(top);
        if basis.rows < n || (0..n).any(|i| basis.at(i, i).is_zero()) {
            return Err(IdealError::ZeroIdeal);
        }
        Ok(IntegerIdeal {
            field: field.clone(),
            basis,
        })
    }

    /// Ideal generated by finitely many integral elements.
    pub fn from_generators(
        field: &NumberField,
        gens: &[FieldElement],
    ) -> Result<Self, IdealError> {
        assert!(!gens.is_empty(), "need at least one generator");
        let mut rows = Vec::new();
        for g in gens {
            if g.field() != field {
                return Err(IdealError::MixedFields);
            }
            let coords = g.integer_coords().ok_or(IdealError::NonIntegralGenerator)?;
            if coords.iter().all(Int::is_zero) {
                continue;
            }
            let m = g.mult_matrix();
            for row in m {
                rows.push(
                    row.into_iter()
                        .map(|c| {
                            debug_assert!(c.denom().is_one());
                            c.numer().clone()
                        })
                        .collect(),
                );
            }
        }
        if rows.is_empty() {
            return Err(IdealError::ZeroIdeal);
        }
        Self::from_lattice_rows(field, rows)
    }

    /// Principal ideal.
    pub fn principal(a: &FieldElement) -> Result<Self, IdealError> {
        Self::from_generators(a.field(), std::slice::from_ref(a))
    }

    /// |O/I| = |det basis| (product of the HNF diagonal).
    pub fn norm(&self) -> Int {
        let mut p = Int::one();
        for i in 0..self.basis.rows {
            p *= self.basis.at(i, i);
        }
        p
    }

    pub fn is_whole_ring(&self) -> bool {
        self.basis == IntMatrix::identity(self.field.degree())
    }

    /// Lattice membership of an integral coordinate vector.
    pub fn contains_coords(&self, v: &[Int]) -> bool {
        let r = linalg::reduce_mod_hnf(&self.basis, v);
        r.iter().all(Int::is_zero)
    }

    pub fn contains_element(&self, a: &FieldElement) -> bool {
        match a.integer_coords() {
            Some(c) => self.contains_coords(&c),
            None => false,
        }
    }

    /// `other` is contained in `self` as a lattice.
    pub fn contains_ideal(&self, other: &IntegerIdeal) -> bool {
        (0..other.basis.rows).all(|r| self.contains_coords(other.basis.row(r)))
    }

    /// Reduce a coordinate vector into the HNF fundamental domain.
    pub fn reduce_coords(&self, v: &[Int]) -> Vec<Int> {
        linalg::reduce_mod_hnf(&self.basis, v)
    }

    pub fn product(&self, other: &IntegerIdeal) -> IntegerIdeal {
        assert!(self.field == other.field, "mixed fields");
        let mut rows = Vec::new();
        for i in 0..self.basis.rows {
            for j in 0..other.basis.rows {
                rows.push(mul_int_coords(
                    &self.field,
                    self.basis.row(i),
                    other.basis.row(j),
                ));
            }
        }
        Self::from_lattice_rows(&self.field, rows).expect("product of nonzero ideals is nonzero")
    }

    pub fn sum(&self, other: &IntegerIdeal) -> IntegerIdeal {
        assert!(self.field == other.field, "mixed fields");
        let stacked = self.basis.vstack(&other.basis);
        Self::from_lattice_rows(&self.field, stacked.rows_vec())
            .expect("sum of nonzero ideals is nonzero")
    }

    pub fn pow(&self, k: usize) -> IntegerIdeal {
        let mut acc = Self::whole_ring(&self.field);
        for _ in 0..k {
            acc = acc.product(self);
        }
        acc
    }

    /// Coprimality: I + J = O (never a norm gcd, which can collide).
    pub fn is_coprime(&self, other: &IntegerIdeal) -> bool {
        self.sum(other).is_whole_ring()
    }

    /// Elementary divisors of O/I via the Smith normal form of the basis.
    pub fn quotient_structure(&self) -> FiniteAbelianGroup {
        let s = snf(&self.basis);
        let g = FiniteAbelianGroup::from_divisors(s.divisors);
        debug_assert_eq!(g.order(), self.norm());
        g
    }

    /// The inverse fractional ideal (O : I) = { b in K : b*I in O },
    /// computed by exact linear algebra inside (1/N)*O and certified by
    /// the product check `I * (O:I) = O`. Failure of the check reports the
    /// order as non-maximal.
    pub fn inverse(&self) -> Result<FractionalIdeal, IdealError> {
        let n = self.field.degree();
        let nrm = self.norm();
        if self.is_whole_ring() {
            return Ok(FractionalIdeal {
                numerator: self.clone(),
                denominator: Int::one(),
            });
        }
        // Solve for x in Z^n with x * b_j in N*O for every basis row b_j:
        // left kernel of [M; -N I] projected to the first n coordinates.
        let cols = n * n;
        let mut m = IntMatrix::zero(n + cols, cols);
        for a in 0..n {
            let mut unit = vec![Int::zero(); n];
            unit[a] = Int::one();
            for j in 0..n {
                let prod = mul_int_coords(&self.field, &unit, self.basis.row(j));
                for (c, v) in prod.into_iter().enumerate() {
                    *m.at_mut(a, j * n + c) = v;
                }
            }
        }
        for c in 0..cols {
            *m.at_mut(n + c, c) = -nrm.clone();
        }
        let kernel = linalg::kernel_lattice(&m);
        let mut proj_rows = Vec::new();
        for r in 0..kernel.rows {
            proj_rows.push(kernel.row(r)[..n].to_vec());
        }
        let (h, _) = hnf(&IntMatrix::from_rows(proj_rows));
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            rows.push(h.row(r).to_vec());
        }
        let lat = IntMatrix::from_rows(rows);
        // minimal denominator
        let mut g = nrm.clone();
        for r in 0..n {
            for c in 0..n {
                g = g.gcd(lat.at(r, c));
            }
        }
        let mut reduced = lat.clone();
        for r in 0..n {
            for c in 0..n {
                *reduced.at_mut(r, c) = lat.at(r, c) / &g;
            }
        }
        let denom = &nrm / &g;
        let numerator = IntegerIdeal {
            field: self.field.clone(),
            basis: reduced,
        };
        let inv = FractionalIdeal {
            numerator,
            denominator: denom.clone(),
        };
        // certification: I * (O:I) = O
        let prod = self.product(&inv.numerator);
        if prod.basis != IntMatrix::identity(n).scale(&denom) {
            return Err(IdealError::NonInvertible);
        }
        Ok(inv)
    }

    /// Iterate representatives of O/I in the HNF fundamental domain.
    pub fn residues(&self) -> ResidueIter {
        let n = self.field.degree();
        let diag: Vec<Int> = (0..n).map(|i| self.basis.at(i, i).clone()).collect();
        ResidueIter {
            diag,
            current: Some(vec![Int::zero(); n]),
        }
    }

    /// Mixed-radix rank of a reduced residue vector (index into dense
    /// discrete-log tables).
    pub fn residue_rank(&self, v: &[Int]) -> usize {
        let n = self.field.degree();
        let mut rank = Int::zero();
        for i in 0..n {
            rank = rank * self.basis.at(i, i) + &v[i];
        }
        rank.to_usize().expect("rank fits usize under the cap")
    }

    fn coprime_residue(&self, v: &[Int]) -> bool {
        let n = self.field.degree();
        let mut rows = Vec::with_capacity(2 * n);
        for a in 0..n {
            let mut unit = vec![Int::zero(); n];
            unit[a] = Int::one();
            rows.push(self.reduce_coords(&mul_int_coords(&self.field, v, &unit)));
        }
        for r in 0..n {
            rows.push(self.basis.row(r).to_vec());
        }
        let (h, _) = hnf(&IntMatrix::from_rows(rows));
        (0..n).all(|i| h.at(i, i).is_one())
    }

    /// |(O/I)^x|. Runs the residue enumeration under `cap` and the
    /// Euler-phi path over the prime splitting whenever each applies, and
    /// cross-checks when both do.
    pub fn residue_unit_count(&self, cap: u64) -> Result<Int, IdealError> {
        let nrm = self.norm();
        let by_enum = if nrm <= Int::from(cap) {
            Some(self.residue_unit_count_by_enumeration())
        } else {
            None
        };
        let by_phi = self.residue_unit_count_by_phi();
        match (by_enum, by_phi) {
            (Some(a), Ok(b)) => {
                if a != b {
                    return Err(IdealError::OracleDisagreement);
                }
                Ok(a)
            }
            (Some(a), Err(IdealError::IndexDivisor(_))) => Ok(a),
            (Some(_), Err(e)) => Err(e),
            (None, Ok(b)) => Ok(b),
            (None, Err(IdealError::IndexDivisor(_))) => Err(IdealError::CapExceeded),
            (None, Err(e)) => Err(e),
        }
    }

    /// Count by enumerating the fundamental domain with the ideal-sum
    /// coprimality test.
    pub fn residue_unit_count_by_enumeration(&self) -> Int {
        let mut count = Int::zero();
        for v in self.residues() {
            if self.coprime_residue(&v) {
                count += 1;
            }
        }
        count
    }

    /// Count via the multiplicative formula over the prime splitting.
    pub fn residue_unit_count_by_phi(&self) -> Result<Int, IdealError> {
        let nrm = self.norm();
        if nrm.is_one() {
            return Ok(Int::one());
        }
        let mut phi = nrm.clone();
        let mut check = Int::one();
        for (p, _) in poly::factor_int(&nrm) {
            let p64 = p.to_u64().ok_or(IdealError::CapExceeded)?;
            let split = prime_splitting(&self.field, p64)?;
            for pf in &split {
                let mut v = 0usize;
                let mut power = pf.ideal.clone();
                while power.contains_ideal(self) {
                    v += 1;
                    power = power.product(&pf.ideal);
                }
                if v > 0 {
                    let np = pf.ideal.norm();
                    phi = phi / &np * (&np - Int::one());
                    check *= num_traits::pow::pow(np, v);
                }
            }
        }
        // every prime factor of the norm must be accounted for
        if check != nrm {
            return Err(IdealError::OracleDisagreement);
        }
        Ok(phi)
    }

    /// Structure of (O/I)^x with a dense discrete-log table.
    pub fn residue_unit_group(&self, cap: u64) -> Result<ResidueUnitGroup, IdealError> {
        let nrm = self.norm();
        if nrm > Int::from(cap) {
            return Err(IdealError::CapExceeded);
        }
        let order = self.residue_unit_count(cap)?;
        let size = nrm.to_usize().ok_or(IdealError::CapExceeded)?;
        let mut table: Vec<Option<Vec<u32>>> = vec![None; size];
        let one = self.reduce_coords(&self.field.one().integer_coords().expect("1 is integral"));
        table[self.residue_rank(&one)] = Some(vec![]);
        let mut elements: Vec<Vec<Int>> = vec![one];
        let mut generators: Vec<Vec<Int>> = Vec::new();
        let mut relation_rows: Vec<Vec<Int>> = Vec::new();

        let mut found = Int::one();
        for cand in self.residues() {
            if found == order {
                break;
            }
            let rank = self.residue_rank(&cand);
            if table[rank].is_some() || !self.coprime_residue(&cand) {
                continue;
            }
            // new generator: order relative to the known subgroup
            let gen_index = generators.len();
            let mut pw = cand.clone();
            let mut ord = 1u32;
            let rel_exps: Vec<u32> = loop {
                let r = self.residue_rank(&pw);
                if let Some(exps) = &table[r] {
                    break exps.clone();
                }
                pw = self.reduce_coords(&mul_int_coords(&self.field, &pw, &cand));
                ord += 1;
            };
            // relation: cand^ord = product of earlier generators^rel_exps
            let mut rel = vec![Int::zero(); gen_index + 1];
            for (i, e) in rel_exps.iter().enumerate() {
                rel[i] = -Int::from(*e);
            }
            rel[gen_index] = Int::from(ord);
            relation_rows.push(rel);
            // extend the table by cosets g^e * H
            let snapshot = elements.clone();
            let mut gp = cand.clone();
            for e in 1..ord {
                for h in &snapshot {
                    let prod = self.reduce_coords(&mul_int_coords(&self.field, &gp, h));
                    let r = self.residue_rank(&prod);
                    if table[r].is_none() {
                        let mut exps = table[self.residue_rank(h)].clone().unwrap();
                        exps.resize(gen_index, 0);
                        exps.push(e);
                        table[r] = Some(exps);
                        elements.push(prod);
                        found += 1;
                    }
                }
                gp = self.reduce_coords(&mul_int_coords(&self.field, &gp, &cand));
            }
            generators.push(cand);
        }
        debug_assert_eq!(found, order);
        let k = generators.len();
        let rel = IntMatrix::from_rows(
            relation_rows
                .into_iter()
                .map(|mut r| {
                    r.resize(k, Int::zero());
                    r
                })
                .collect(),
        );
        let structure = if k == 0 {
            FiniteAbelianGroup::trivial()
        } else {
            FiniteAbelianGroup::from_divisors(snf(&rel).divisors)
        };
        debug_assert_eq!(structure.order(), order);
        Ok(ResidueUnitGroup {
            modulus: self.clone(),
            generators,
            relations: rel,
            structure,
            table,
        })
    }
}

pub struct ResidueIter {
    diag: Vec<Int>,
    current: Option<Vec<Int>>,
}

impl Iterator for ResidueIter {
    type Item = Vec<Int>;

    fn next(&mut self) -> Option<Vec<Int>> {
        let cur = self.current.clone()?;
        let mut nxt = cur.clone();
        let mut i = nxt.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            nxt[i] += 1;
            if nxt[i] < self.diag[i] {
                self.current = Some(nxt);
                break;
            }
            nxt[i] = Int::zero();
        }
        Some(cur)
    }
}

/// (1/denominator) * numerator with the denominator minimal.
#[derive(Clone, PartialEq, Eq)]
pub struct FractionalIdeal {
    pub numerator: IntegerIdeal,
    pub denominator: Int,
}

impl fmt::Debug for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1/{}) * {:?}", self.denominator, self.numerator)
    }
}

impl FractionalIdeal {
    pub fn from_integer_ideal(i: &IntegerIdeal) -> Self {
        FractionalIdeal {
            numerator: i.clone(),
            denominator: Int::one(),
        }
    }

    pub fn field(&self) -> &NumberField {
        self.numerator.field()
    }

    pub fn is_whole_ring(&self) -> bool {
        self.denominator.is_one() && self.numerator.is_whole_ring()
    }

    /// Membership of a field element (rational coordinates allowed).
    pub fn contains(&self, a: &FieldElement) -> bool {
        let scaled = a.scale(&Rat::from_integer(self.denominator.clone()));
        self.numerator.contains_element(&scaled)
    }

    /// Index of O inside this fractional ideal (assumes O is contained,
    /// which holds for inverses of integral ideals).
    pub fn index_over_ring(&self) -> Int {
        let d = &self.denominator;
        let n = self.field().degree();
        let sub = IntMatrix::identity(n).scale(d);
        linalg::lattice_index(&sub, self.numerator.basis())
            .expect("O is contained in the inverse of an integral ideal")
    }
}

/// Finite abelian group as its elementary divisor chain (each >= 2).
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    divisors: Vec<Int>,
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divisors.is_empty() {
            write!(f, "trivial group")
        } else {
            let parts: Vec<String> = self.divisors.iter().map(|d| format!("Z/{d}")).collect();
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { divisors: vec![] }
    }

    /// Keep the divisors > 1 of a Smith chain; panics on a zero divisor
    /// (infinite quotient).
    pub fn from_divisors(divisors: Vec<Int>) -> Self {
        assert!(
            divisors.iter().all(|d| !d.is_zero()),
            "infinite quotient has no finite structure"
        );
        let kept: Vec<Int> = divisors.into_iter().filter(|d| *d > Int::one()).collect();
        for w in kept.windows(2) {
            debug_assert!(w[1].mod_floor(&w[0]).is_zero(), "divisor chain violated");
        }
        FiniteAbelianGroup { divisors: kept }
    }

    pub fn divisors(&self) -> &[Int] {
        &self.divisors
    }

    pub fn order(&self) -> Int {
        let mut p = Int::one();
        for d in &self.divisors {
            p *= d;
        }
        p
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    /// Number of invariant factors (minimal generator count).
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

/// Structure of (O/I)^x plus a dense residue -> exponent-vector table.
pub struct ResidueUnitGroup {
    modulus: IntegerIdeal,
    /// residue coordinates of the chosen generators
    generators: Vec<Vec<Int>>,
    /// relation lattice rows over the generators
    relations: IntMatrix,
    structure: FiniteAbelianGroup,
    /// rank-indexed exponent vectors; entries shorter than the generator
    /// count are implicitly zero-padded
    table: Vec<Option<Vec<u32>>>,
}

impl ResidueUnitGroup {
    pub fn modulus(&self) -> &IntegerIdeal {
        &self.modulus
    }

    pub fn structure(&self) -> &FiniteAbelianGroup {
        &self.structure
    }

    pub fn order(&self) -> Int {
        self.structure.order()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Exponent vector of a residue over the generators; `None` for
    /// non-units.
    pub fn dlog(&self, coords: &[Int]) -> Option<Vec<Int>> {
        let reduced = self.modulus.reduce_coords(coords);
        let rank = self.modulus.residue_rank(&reduced);
        self.table[rank].as_ref().map(|exps| {
            let mut v: Vec<Int> = exps.iter().map(|&e| Int::from(e)).collect();
            v.resize(self.generators.len(), Int::zero());
            v
        })
    }

    /// Discrete log of a field element (must be integral and a unit mod I).
    pub fn dlog_element(&self, a: &FieldElement) -> Option<Vec<Int>> {
        self.dlog(&a.integer_coords()?)
    }
}

/// A prime ideal above p with its residue degree and ramification index.
#[derive(Clone, Debug)]
pub struct PrimeFactor {
    pub ideal: IntegerIdeal,
    pub residue_degree: usize,
    pub ramification: usize,
}

/// Dedekind factorization of (p): factor the defining polynomial mod p and
/// lift. Requires p not to divide the index of the power order.
pub fn prime_splitting(field: &NumberField, p: u64) -> Result<Vec<PrimeFactor>, IdealError> {
    assert!(poly::is_prime_u64(p), "p must be prime");
    let index = field.power_order_index();
    if index.mod_floor(&Int::from(p)).is_zero() {
        return Err(IdealError::IndexDivisor(p));
    }
    let fp = poly::modp::Poly::from_int_poly(field.min_poly(), p);
    let factors = poly::modp::factor(&fp);
    let mut out = Vec::new();
    let mut efsum = 0usize;
    for (g, e) in factors {
        let lift = IntPoly::new(g.coeffs.iter().map(|&c| Int::from(c)).collect());
        let gen = field.eval_int_poly(&lift, &field.theta());
        let prime = IntegerIdeal::from_generators(field, &[field.from_int(p as i64), gen])
            .expect("prime ideal is nonzero");
        let f_deg = g.deg();
        debug_assert_eq!(
            prime.norm(),
            num_traits::pow::pow(Int::from(p), f_deg),
            "prime norm must be p^f"
        );
        efsum += f_deg * e as usize;
        out.push(PrimeFactor {
            ideal: prime,
            residue_degree: f_deg,
            ramification: e as usize,
        });
    }
    debug_assert_eq!(efsum, field.degree(), "sum e_i f_i = n");
    Ok(out)
}

/// p-maximality via invertibility of the p-radical: the kernel of the
/// iterated Frobenius on O/pO lifts to the radical ideal of (p), and the
/// radical is invertible exactly when the order is p-maximal.
pub fn p_maximal_via_radical(field: &NumberField, p: u64) -> bool {
    let n = field.degree();
    let pi = Int::from(p);
    // Frobenius matrix on O/pO: rows are coords of b_i^p mod p
    let mut frob: Vec<Vec<u64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut base = vec![Int::zero(); n];
        base[i] = Int::one();
        let mut acc = field.one().integer_coords().expect("1 integral");
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_int_coords(field, &acc, &base);
                for c in acc.iter_mut() {
                    *c = c.mod_floor(&pi);
                }
            }
            base = mul_int_coords(field, &base, &base);
            for c in base.iter_mut() {
                *c = c.mod_floor(&pi);
            }
            e >>= 1;
        }
        frob.push(acc.iter().map(|c| c.mod_floor(&pi).to_u64().unwrap()).collect());
    }
    // iterate so that p^j >= n
    let mut j = 1usize;
    let mut pj = p as u128;
    while (pj as usize) < n {
        pj = pj.saturating_mul(p as u128);
        j += 1;
    }
    let mut mat = frob.clone();
    for _ in 1..j {
        mat = modp_mat_mul(&mat, &frob, p);
    }
    let kernel = modp_kernel(&mat, p);
    // radical lattice: p*O plus lifts of the kernel vectors
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for i in 0..n {
        let mut r = vec![Int::zero(); n];
        r[i] = pi.clone();
        rows.push(r);
    }
    for v in kernel {
        rows.push(v.iter().map(|&c| Int::from(c)).collect());
    }
    let radical = IntegerIdeal::from_lattice_rows(field, rows).expect("radical contains pO");
    radical.inverse().is_ok()
}

fn modp_mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = (out[i][j] as u128 + a[i][k] as u128 * b[k][j] as u128) as u64 % p;
            }
        }
    }
    out
}

/// Basis of the left kernel { x : x * M = 0 } over F_p.
fn modp_kernel(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut id: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    let inv = |x: u64| -> u64 {
        let mut r = 1u64;
        let mut b = x % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(piv) = (rank..n).find(|&r| a[r][col] % p != 0) else {
            continue;
        };
        a.swap(rank, piv);
        id.swap(rank, piv);
        let iv = inv(a[rank][col]);
        for c in 0..cols {
            a[rank][c] = (a[rank][c] as u128 * iv as u128 % p as u128) as u64;
        }
        for c in 0..n {
            id[rank][c] = (id[rank][c] as u128 * iv as u128 % p as u128) as u64;
        }
        for r in 0..n {
            if r == rank || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for c in 0..cols {
                a[r][c] = ((a[r][c] as u128 + (p as u128 - f as u128) * a[rank][c] as u128)
                    % p as u128) as u64;
            }
            for c in 0..n {
                id[r][c] = ((id[r][c] as u128 + (p as u128 - f as u128) * id[rank][c] as u128)
                    % p as u128) as u64;
            }
        }
        rank += 1;
    }
    id[rank..].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn cubic(m: i64) -> NumberField {
        NumberField::new(IntPoly::from_i64(&[-1, m, 0, 1]), None).unwrap()
    }

    #[test]
    fn ideal_from_generators_norms() {
        let k1 = cubic(1);
        let g = k1.theta().sub(&k1.one());
        let i = IntegerIdeal::from_generators(&k1, &[g]).unwrap();
        assert!(i.is_whole_ring()); // norm |f(1)| = 1
        let k2 = cubic(2);
        let g2 = k2.theta().sub(&k2.one());
        let i2 = IntegerIdeal::from_generators(&k2, &[g2]).unwrap();
        assert_eq!(i2.norm(), int(2));
        let two = IntegerIdeal::principal(&k2.from_int(2)).unwrap();
        assert_eq!(two.norm(), int(8));
    }

    #[test]
    fn zero_generators_rejected() {
        let k = cubic(1);
        assert!(matches!(
            IntegerIdeal::from_generators(&k, &[k.zero()]),
            Err(IdealError::ZeroIdeal)
        ));
    }

    #[test]
    fn norm_of_theta_squared_minus_one() {
        let k = cubic(2);
        let g = k.theta().pow(2).sub(&k.one());
        let i = IntegerIdeal::principal(&g).unwrap();
        assert_eq!(i.norm(), int(8)); // |f(1) * f(-1)| = |2 * -4|
    }

    #[test]
    fn quotient_structures() {
        let k = cubic(2);
        assert!(IntegerIdeal::whole_ring(&k).quotient_structure().is_trivial());
        let p = IntegerIdeal::principal(&k.theta().sub(&k.one())).unwrap();
        assert_eq!(p.quotient_structure().divisors(), &[int(2)]);
        let two = IntegerIdeal::principal(&k.from_int(2)).unwrap();
        assert_eq!(two.quotient_structure().divisors(), &[int(2), int(2), int(2)]);
    }

    #[test]
    fn inverse_fractional() {
        let k = cubic(2);
        let whole = IntegerIdeal::whole_ring(&k);
        assert!(whole.inverse().unwrap().is_whole_ring());

        let two = IntegerIdeal::principal(&k.from_int(2)).unwrap();
        let inv2 = two.inverse().unwrap();
        assert_eq!(inv2.denominator, int(2));
        assert!(inv2.numerator.is_whole_ring());

        let p = IntegerIdeal::principal(&k.theta().sub(&k.one())).unwrap();
        let ipv = p.inverse().unwrap();
        let inv_elem = k.theta().sub(&k.one()).inv().unwrap();
        assert!(ipv.contains(&inv_elem));
        assert_eq!(ipv.index_over_ring(), int(2));
    }

    #[test]
    fn product_and_sum() {
        let k = cubic(2);
        let i = IntegerIdeal::principal(&k.theta().sub(&k.one())).unwrap();
        let whole = IntegerIdeal::whole_ring(&k);
        assert_eq!(i.product(&whole), i);
        let two = IntegerIdeal::principal(&k.from_int(2)).unwrap();
        let three = IntegerIdeal::principal(&k.from_int(3)).unwrap();
        let six = IntegerIdeal::principal(&k.from_int(6)).unwrap();
        assert_eq!(two.product(&three), six);
        assert_eq!(i.product(&two).norm(), i.norm() * two.norm());
    }

    #[test]
    fn residue_unit_counts() {
        let k2 = cubic(2);
        let p = IntegerIdeal::principal(&k2.theta().sub(&k2.one())).unwrap();
        assert_eq!(p.residue_unit_count(1000).unwrap(), int(1));
        let two = IntegerIdeal::principal(&k2.from_int(2)).unwrap();
        assert_eq!(two.residue_unit_count(1000).unwrap(), int(3)); // units of F2 x F4
        let whole = IntegerIdeal::whole_ring(&k2);
        assert_eq!(whole.residue_unit_count(1000).unwrap(), int(1));
        // P^3 has phi = 8 * (1 - 1/2) = 4
        let p3 = p.pow(3);
        assert_eq!(p3.residue_unit_count(1000).unwrap(), int(4));
    }

    #[test]
    fn residue_unit_group_structures() {
        let k2 = cubic(2);
        let p = IntegerIdeal::principal(&k2.theta().sub(&k2.one())).unwrap();
        let p3 = p.pow(3);
        let g = p3.residue_unit_group(1000).unwrap();
        assert_eq!(g.order(), int(4));
        let two = IntegerIdeal::principal(&k2.from_int(2)).unwrap();
        let g2 = two.residue_unit_group(1000).unwrap();
        assert_eq!(g2.structure().divisors(), &[int(3)]);
        let whole = IntegerIdeal::whole_ring(&k2);
        assert!(whole.residue_unit_group(1000).unwrap().structure().is_trivial());
    }

    #[test]
    fn dlog_roundtrip() {
        let k2 = cubic(2);
        let seven = IntegerIdeal::principal(&k2.from_int(7)).unwrap();
        let g = seven.residue_unit_group(1_000_000).unwrap();
        let d = g.dlog_element(&k2.theta()).unwrap();
        assert_eq!(d.len(), g.generator_count());
        assert!(g.dlog_element(&k2.from_int(7)).is_none());
    }

    #[test]
    fn splitting_patterns() {
        let k2 = cubic(2);
        let s2 = prime_splitting(&k2, 2).unwrap();
        let mut degs: Vec<usize> = s2.iter().map(|p| p.residue_degree).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 2]);

        let k1 = cubic(1);
        let s = prime_splitting(&k1, 2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].residue_degree, 3); // inert

        let s31 = prime_splitting(&k1, 31).unwrap();
        assert!(s31.iter().any(|p| p.ramification >= 2));
    }

    #[test]
    fn coprimality_is_sum_based() {
        let k2 = cubic(2);
        let p = IntegerIdeal::principal(&k2.theta().sub(&k2.one())).unwrap();
        let q = prime_splitting(&k2, 2)
            .unwrap()
            .into_iter()
            .find(|pf| pf.residue_degree == 2)
            .unwrap()
            .ideal;
        // p and q both lie above 2 but are distinct primes
        assert!(p.is_coprime(&q));
        assert!(!p.is_coprime(&p.pow(2)));
    }

    #[test]
    fn radical_maximality_matches_dedekind() {
        let k1 = cubic(1);
        for p in [2u64, 3, 5, 31] {
            assert_eq!(k1.dedekind_p_maximal(p), p_maximal_via_radical(&k1, p));
        }
        // Z[sqrt(-3)] is not 2-maximal
        let q = NumberField::new(IntPoly::from_i64(&[3, 0, 1]), None).unwrap();
        assert!(!p_maximal_via_radical(&q, 2));
        assert!(p_maximal_via_radical(&q, 3));
    }

    #[test]
    fn residues_iterate_norm_many() {
        let k2 = cubic(2);
        let p = IntegerIdeal::principal(&k2.theta().sub(&k2.one())).unwrap();
        assert_eq!(p.residues().count(), 2);
        assert_eq!(p.pow(3).residues().count(), 8);
    }
}
