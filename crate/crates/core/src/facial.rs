//! Facial reduction over the nonnegative orthant and the unified
//! integer / real / conic strong-duality certificate.
//!
//! For `{x >= 0 : A x = b}` the minimal face of the orthant containing the
//! feasible set is `{x >= 0 : x_i = 0, i ∈ Z}` where `Z` is the set of
//! coordinates forced to zero. Each exposing vector is `y = Aᵀw` restricted
//! to the current face, with `y >= 0` and `bᵀw = 0`; that pair proves
//! `⟨y, x⟩ = 0` for every feasible `x` without reference to the LP that
//! found it. Once no coordinate is forced, the feasible set meets the
//! relative interior of the face and the reduced dual attains.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::intdual::{adjoint_solve, torsion_certificate, IntegerCertificate};
use crate::linalg::{dot as zdot, kernel_basis, solve_integer, IntegerMatrix};
use crate::lp::{
    dot, forced_zero_coordinates, lp_solve, solve_rational, verify_farkas, LinearProgram,
    LpStatus, Rational, RationalMatrix,
};
use crate::{par, Error, Result};

/// One step of the exposing chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposingVector {
    /// `y`, nonnegative, zero outside the face it was found on.
    pub y: Vec<Rational>,
    /// `w` with `y = Aᵀw` on that face's coordinates and `bᵀw = 0`.
    pub w: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDescriptor {
    /// Coordinates fixed at zero on the face.
    pub zero_set: BTreeSet<usize>,
    pub exposing_chain: Vec<ExposingVector>,
}

impl FaceDescriptor {
    pub fn whole_orthant() -> Self {
        Self {
            zero_set: BTreeSet::new(),
            exposing_chain: Vec::new(),
        }
    }

    /// Columns of the face, in increasing order.
    pub fn free_coordinates(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|j| !self.zero_set.contains(j)).collect()
    }

    /// Checks the chain by substitution against `(A, b)`: every `y_j` is
    /// nonnegative, vanishes on earlier zero sets, equals `Aᵀw_j` on the
    /// remaining coordinates with `bᵀw_j = 0`, and the supports union to `Z`.
    pub fn verify(&self, a: &RationalMatrix, b: &[Rational]) -> bool {
        let n = a.cols();
        let mut zero: BTreeSet<usize> = BTreeSet::new();
        for step in &self.exposing_chain {
            if step.y.len() != n || step.w.len() != a.rows() || !dot(b, &step.w).is_zero() {
                return false;
            }
            let Ok(atw) = a.tr_mul_vec(&step.w) else {
                return false;
            };
            for j in 0..n {
                let y = &step.y[j];
                if y.is_negative() {
                    return false;
                }
                if zero.contains(&j) {
                    if !y.is_zero() {
                        return false;
                    }
                } else if *y != atw[j] {
                    return false;
                }
            }
            let support: Vec<usize> = (0..n).filter(|&j| step.y[j].is_positive()).collect();
            if support.is_empty() {
                return false;
            }
            zero.extend(support);
        }
        zero == self.zero_set
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalFace {
    Face(FaceDescriptor),
    /// `{x >= 0 : A x = b}` is empty; `y` has `yᵀA >= 0`, `yᵀb < 0`.
    Infeasible(Vec<Rational>),
}

/// Minimal face of the orthant containing `{x >= 0 : A x = b}`.
pub fn minimal_face(a: &RationalMatrix, b: &[Rational]) -> Result<MinimalFace> {
    let n = a.cols();
    let feasibility = lp_solve(&LinearProgram::standard(
        vec![Rational::zero(); n],
        a.clone(),
        b.to_vec(),
    ))?;
    if feasibility.status == LpStatus::Infeasible {
        let y = feasibility
            .infeasibility_certificate
            .ok_or_else(|| Error::Defect("infeasible LP without certificate".into()))?;
        return Ok(MinimalFace::Infeasible(y));
    }

    let mut face = FaceDescriptor::whole_orthant();
    for iteration in 0..=n {
        let cols = face.free_coordinates(n);
        let sub = a.select_cols(&cols);
        let forced_local = forced_zero_coordinates(&sub, b)?;
        if forced_local.is_empty() {
            return Ok(MinimalFace::Face(face));
        }
        if iteration == n {
            return Err(Error::Defect(format!(
                "facial reduction exceeded {n} iterations"
            )));
        }
        let forced: Vec<usize> = forced_local.iter().map(|&i| cols[i]).collect();
        let ws = par::try_map(&forced_local.iter().copied().collect::<Vec<_>>(), |&i| {
            exposing_multiplier(&sub, b, i)
        })?;
        let mut w = vec![Rational::zero(); a.rows()];
        for wi in ws {
            for (acc, x) in w.iter_mut().zip(wi) {
                *acc += x;
            }
        }
        let atw = a.tr_mul_vec(&w)?;
        let mut y = vec![Rational::zero(); n];
        for &j in &cols {
            y[j] = atw[j].clone();
        }
        let support: BTreeSet<usize> = (0..n).filter(|&j| y[j].is_positive()).collect();
        if support != forced.iter().copied().collect() || y.iter().any(Signed::is_negative) {
            return Err(Error::Defect(
                "exposing vector support disagrees with forced-zero set".into(),
            ));
        }
        face.zero_set.extend(forced);
        face.exposing_chain.push(ExposingVector { y, w });
    }
    unreachable!("loop returns or errors by iteration n")
}

/// `w` with `Aᵀw >= 0`, `(Aᵀw)_i >= 1`, `bᵀw = 0`; exists exactly when
/// coordinate `i` is forced to zero on a nonempty feasible set.
fn exposing_multiplier(a: &RationalMatrix, b: &[Rational], i: usize) -> Result<Vec<Rational>> {
    let (m, n) = (a.rows(), a.cols());
    // variables: w (m, free), s (n, >= 0); Aᵀw - s = e_i; bᵀw = 0
    let mut rows = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut r: Vec<Rational> = (0..m).map(|k| a[(k, j)].clone()).collect();
        r.extend((0..n).map(|k| if k == j { -Rational::one() } else { Rational::zero() }));
        rows.push(r);
    }
    let mut last: Vec<Rational> = b.to_vec();
    last.extend(std::iter::repeat_n(Rational::zero(), n));
    rows.push(last);
    let mut rhs = vec![Rational::zero(); n + 1];
    rhs[i] = Rational::one();
    let p = LinearProgram {
        objective: vec![Rational::zero(); m + n],
        eq_matrix: RationalMatrix::from_rows(m + n, rows)?,
        eq_rhs: rhs,
        nonneg: (m..m + n).collect(),
    };
    let out = lp_solve(&p)?;
    match (out.status, out.primal) {
        (LpStatus::Optimal, Some(x)) => Ok(x[..m].to_vec()),
        _ => Err(Error::Defect(format!(
            "no exposing multiplier for forced coordinate {i}"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedDual {
    /// `λ` with `c + Aᵀλ >= 0` off the zero set, maximising `-⟨b, λ⟩`.
    pub lambda: Vec<Rational>,
    pub dual_value: Rational,
    /// Optimal primal point on the face (zero on the zero set).
    pub primal: Vec<Rational>,
    pub primal_value: Rational,
}

/// Solves the conic dual restricted to `face`.
pub fn reduced_dual_solve(
    a: &RationalMatrix,
    b: &[Rational],
    c: &[Rational],
    face: &FaceDescriptor,
) -> Result<ReducedDual> {
    let n = a.cols();
    if c.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "cost vector of length {} for {n} variables",
            c.len()
        )));
    }
    let cols = face.free_coordinates(n);
    let p = LinearProgram::standard(
        cols.iter().map(|&j| c[j].clone()).collect(),
        a.select_cols(&cols),
        b.to_vec(),
    );
    let out = lp_solve(&p)?;
    match out.status {
        LpStatus::Optimal => {
            let y = out.dual.expect("optimal outcome carries a dual");
            let x_local = out.primal.expect("optimal outcome carries a primal");
            let mut primal = vec![Rational::zero(); n];
            for (&j, v) in cols.iter().zip(x_local) {
                primal[j] = v;
            }
            let lambda: Vec<Rational> = y.into_iter().map(|v| -v).collect();
            let dual_value = -dot(b, &lambda);
            Ok(ReducedDual {
                lambda,
                dual_value,
                primal_value: dot(c, &primal),
                primal,
            })
        }
        LpStatus::Unbounded => Err(Error::Unbounded),
        LpStatus::Infeasible => Err(Error::Infeasible),
    }
}

/// Integer block: `min cᵀx, A x = b, x ∈ Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerBlock {
    pub a: IntegerMatrix,
    pub b: Vec<BigInt>,
    pub c: Vec<BigInt>,
}

/// Real block (`x ∈ Q^n` free) or conic block (`x >= 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalBlock {
    pub a: RationalMatrix,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

/// Any block may be absent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnifiedProblem {
    pub integer: Option<IntegerBlock>,
    pub real: Option<RationalBlock>,
    pub conic: Option<RationalBlock>,
}

impl UnifiedProblem {
    pub fn check_dims(&self) -> Result<()> {
        fn check(label: &str, rows: usize, cols: usize, b: usize, c: usize) -> Result<()> {
            if rows != b || cols != c {
                return Err(Error::DimensionMismatch(format!(
                    "{label} block: {rows}x{cols} matrix with |b| = {b}, |c| = {c}"
                )));
            }
            Ok(())
        }
        if let Some(z) = &self.integer {
            check("integer", z.a.rows(), z.a.cols(), z.b.len(), z.c.len())?;
        }
        if let Some(r) = &self.real {
            check("real", r.a.rows(), r.a.cols(), r.b.len(), r.c.len())?;
        }
        if let Some(k) = &self.conic {
            check("conic", k.a.rows(), k.a.cols(), k.b.len(), k.c.len())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualMultipliers {
    pub lambda_z: Option<Vec<BigInt>>,
    pub lambda_r: Vec<Rational>,
    pub lambda_k: Vec<Rational>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimalPoints {
    pub x_z: Option<Vec<BigInt>>,
    pub x_r: Vec<Rational>,
    pub x_k: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnifiedCertificate {
    pub integer_part: Option<IntegerCertificate>,
    pub face: Option<FaceDescriptor>,
    pub slater_on_face: bool,
    pub dual_multipliers: DualMultipliers,
    pub primal_points: PrimalPoints,
    pub primal_value: Rational,
    pub dual_value: Rational,
}

impl UnifiedCertificate {
    /// Recomputes every claim by substitution. Slater on the face is
    /// re-established by a fresh forced-zero computation.
    pub fn verify(&self, p: &UnifiedProblem) -> bool {
        if p.check_dims().is_err() {
            return false;
        }
        let mut primal = Rational::zero();
        let mut dual = Rational::zero();
        let (lz, xz) = (&self.dual_multipliers.lambda_z, &self.primal_points.x_z);
        match (&p.integer, &self.integer_part, lz, xz) {
            (None, None, None, None) => {}
            (Some(z), Some(cert), Some(lambda), Some(x)) => {
                if !cert.torsion_free || !cert.verify(&z.a, Some(&z.c)) {
                    return false;
                }
                if cert.adjoint_multiplier.as_ref() != Some(lambda) {
                    return false;
                }
                if z.a.mul_vec(x).ok().as_deref() != Some(&z.b[..]) {
                    return false;
                }
                primal += Rational::from_integer(zdot(&z.c, x));
                dual -= Rational::from_integer(zdot(&z.b, lambda));
            }
            _ => return false,
        }
        if let Some(r) = &p.real {
            let (lambda, x) = (&self.dual_multipliers.lambda_r, &self.primal_points.x_r);
            let Ok(atl) = r.a.tr_mul_vec(lambda) else {
                return false;
            };
            if atl.iter().zip(&r.c).any(|(v, c)| !(v + c).is_zero()) {
                return false;
            }
            if r.a.mul_vec(x).ok().as_deref() != Some(&r.b[..]) {
                return false;
            }
            primal += dot(&r.c, x);
            dual -= dot(&r.b, lambda);
        }
        match (&p.conic, &self.face) {
            (None, None) => {}
            (Some(k), Some(face)) => {
                let (lambda, x) = (&self.dual_multipliers.lambda_k, &self.primal_points.x_k);
                if !face.verify(&k.a, &k.b) || !self.slater_on_face {
                    return false;
                }
                let Ok(atl) = k.a.tr_mul_vec(lambda) else {
                    return false;
                };
                let dual_ok = (0..k.a.cols())
                    .filter(|j| !face.zero_set.contains(j))
                    .all(|j| !(&k.c[j] + &atl[j]).is_negative());
                let on_face = x.len() == k.a.cols()
                    && x.iter().all(|v| !v.is_negative())
                    && face.zero_set.iter().all(|&j| x[j].is_zero());
                if !dual_ok || !on_face || k.a.mul_vec(x).ok().as_deref() != Some(&k.b[..]) {
                    return false;
                }
                let cols = face.free_coordinates(k.a.cols());
                let slater = forced_zero_coordinates(&k.a.select_cols(&cols), &k.b);
                if !slater.is_ok_and(|f| f.is_empty()) {
                    return false;
                }
                primal += dot(&k.c, x);
                dual -= dot(&k.b, lambda);
            }
            _ => return false,
        }
        primal == self.primal_value && dual == self.dual_value && primal == dual
    }
}

/// Why a component could not be certified, with evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentFailure {
    /// `coker f_Z` has torsion.
    IntegerTorsion(IntegerCertificate),
    /// `f_Z x = b_Z` has no rational solution: `yᵀf_Z = 0`, `yᵀb_Z < 0`.
    IntegerInfeasible { certificate: Vec<Rational> },
    /// Objective varies along an integer kernel direction.
    IntegerUnbounded { point: Vec<BigInt>, direction: Vec<BigInt> },
    RealInfeasible { certificate: Vec<Rational> },
    RealUnbounded { point: Vec<Rational>, direction: Vec<Rational> },
    ConicInfeasible { certificate: Vec<Rational> },
    ConicUnbounded { point: Vec<Rational>, direction: Vec<Rational> },
}

impl ComponentFailure {
    pub fn component(&self) -> &'static str {
        match self {
            Self::IntegerTorsion(_) | Self::IntegerInfeasible { .. } | Self::IntegerUnbounded { .. } => {
                "integer"
            }
            Self::RealInfeasible { .. } | Self::RealUnbounded { .. } => "real",
            Self::ConicInfeasible { .. } | Self::ConicUnbounded { .. } => "conic",
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::IntegerTorsion(_) => "torsion",
            Self::IntegerInfeasible { .. } | Self::RealInfeasible { .. } | Self::ConicInfeasible { .. } => {
                "infeasible"
            }
            Self::IntegerUnbounded { .. } | Self::RealUnbounded { .. } | Self::ConicUnbounded { .. } => {
                "unbounded"
            }
        }
    }

    /// Substitution check of the failure evidence.
    pub fn verify(&self, p: &UnifiedProblem) -> bool {
        let all_nonneg = |n: usize| (0..n).collect::<BTreeSet<_>>();
        match (self, &p.integer, &p.real, &p.conic) {
            (Self::IntegerTorsion(cert), Some(z), _, _) => {
                !cert.torsion_free && cert.verify(&z.a, None)
            }
            (Self::IntegerInfeasible { certificate }, Some(z), _, _) => {
                verify_farkas(&RationalMatrix::from(&z.a), &to_rationals(&z.b), &BTreeSet::new(), certificate)
            }
            (Self::IntegerUnbounded { point, direction }, Some(z), _, _) => {
                z.a.mul_vec(point).is_ok_and(|v| v == z.b)
                    && z.a.mul_vec(direction).is_ok_and(|v| v.iter().all(Zero::is_zero))
                    && zdot(&z.c, direction).is_negative()
            }
            (Self::RealInfeasible { certificate }, _, Some(r), _) => {
                verify_farkas(&r.a, &r.b, &BTreeSet::new(), certificate)
            }
            (Self::RealUnbounded { point, direction }, _, Some(r), _) => {
                r.a.mul_vec(point).is_ok_and(|v| v == r.b)
                    && r.a.mul_vec(direction).is_ok_and(|v| v.iter().all(Zero::is_zero))
                    && dot(&r.c, direction).is_negative()
            }
            (Self::ConicInfeasible { certificate }, _, _, Some(k)) => {
                verify_farkas(&k.a, &k.b, &all_nonneg(k.a.cols()), certificate)
            }
            (Self::ConicUnbounded { point, direction }, _, _, Some(k)) => {
                point.iter().chain(direction).all(|v| !v.is_negative())
                    && k.a.mul_vec(point).is_ok_and(|v| v == k.b)
                    && k.a.mul_vec(direction).is_ok_and(|v| v.iter().all(Zero::is_zero))
                    && dot(&k.c, direction).is_negative()
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnifiedOutcome {
    Certified(Box<UnifiedCertificate>),
    Failed(ComponentFailure),
}

fn to_rationals(v: &[BigInt]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

/// `y` with `yᵀA = 0` and `yᵀb = -1`, proving `A x = b` has no rational
/// solution.
fn inconsistency_certificate(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    // [Aᵀ; bᵀ] y = [0; -1]
    let mut rows = a.transpose().to_rows();
    rows.push(b.to_vec());
    let mut rhs = vec![Rational::zero(); a.cols()];
    rhs.push(-Rational::one());
    solve_rational(&RationalMatrix::from_rows(a.rows(), rows)?, &rhs)?
        .ok_or_else(|| Error::Defect("inconsistent system without a left certificate".into()))
}

struct IntegerPart {
    cert: IntegerCertificate,
    x: Vec<BigInt>,
    lambda: Vec<BigInt>,
}

fn integer_component(z: &IntegerBlock) -> Result<std::result::Result<IntegerPart, ComponentFailure>> {
    let cert = torsion_certificate(&z.a);
    if !cert.torsion_free {
        return Ok(Err(ComponentFailure::IntegerTorsion(cert)));
    }
    let Some(sol) = solve_integer(&z.a, &z.b)? else {
        // torsion-free: integer infeasibility is rational infeasibility
        let certificate = inconsistency_certificate(&RationalMatrix::from(&z.a), &to_rationals(&z.b))?;
        return Ok(Err(ComponentFailure::IntegerInfeasible { certificate }));
    };
    let Some(lambda) = adjoint_solve(&z.a, &z.c)? else {
        let kernel = kernel_basis(&z.a);
        let direction = (0..kernel.cols())
            .map(|j| kernel.col(j))
            .find_map(|d| {
                let v = zdot(&z.c, &d);
                if v.is_zero() {
                    None
                } else if v.is_negative() {
                    Some(d)
                } else {
                    Some(d.into_iter().map(|x| -x).collect())
                }
            })
            .ok_or_else(|| Error::Defect("adjoint unsolvable but objective constant on kernel".into()))?;
        return Ok(Err(ComponentFailure::IntegerUnbounded {
            point: sol.particular,
            direction,
        }));
    };
    let mut cert = cert;
    cert.adjoint_multiplier = Some(lambda.clone());
    Ok(Ok(IntegerPart {
        cert,
        x: sol.particular,
        lambda,
    }))
}

type RealPart = (Vec<Rational>, Vec<Rational>);

fn real_component(r: &RationalBlock) -> Result<std::result::Result<RealPart, ComponentFailure>> {
    let Some(x) = solve_rational(&r.a, &r.b)? else {
        let certificate = inconsistency_certificate(&r.a, &r.b)?;
        return Ok(Err(ComponentFailure::RealInfeasible { certificate }));
    };
    let neg_c: Vec<Rational> = r.c.iter().map(|v| -v).collect();
    let Some(lambda) = solve_rational(&r.a.transpose(), &neg_c)? else {
        // c is not in the row space: project it onto ker A for a descent ray
        let direction = real_descent_direction(&r.a, &r.c)?;
        return Ok(Err(ComponentFailure::RealUnbounded { point: x, direction }));
    };
    Ok(Ok((x, lambda)))
}

/// `d` with `A d = 0` and `cᵀd = -1`.
fn real_descent_direction(a: &RationalMatrix, c: &[Rational]) -> Result<Vec<Rational>> {
    let mut rows = a.to_rows();
    rows.push(c.to_vec());
    let mut rhs = vec![Rational::zero(); a.rows()];
    rhs.push(-Rational::one());
    solve_rational(&RationalMatrix::from_rows(a.cols(), rows)?, &rhs)?
        .ok_or_else(|| Error::Defect("no descent direction for unsolvable adjoint".into()))
}

struct ConicPart {
    face: FaceDescriptor,
    dual: ReducedDual,
}

fn conic_component(k: &RationalBlock) -> Result<std::result::Result<ConicPart, ComponentFailure>> {
    let face = match minimal_face(&k.a, &k.b)? {
        MinimalFace::Infeasible(certificate) => {
            return Ok(Err(ComponentFailure::ConicInfeasible { certificate }))
        }
        MinimalFace::Face(f) => f,
    };
    match reduced_dual_solve(&k.a, &k.b, &k.c, &face) {
        Ok(dual) => Ok(Ok(ConicPart { face, dual })),
        Err(Error::Unbounded) => {
            let out = lp_solve(&LinearProgram::standard(k.c.clone(), k.a.clone(), k.b.clone()))?;
            match (out.primal, out.unbounded_ray) {
                (Some(point), Some(direction)) => {
                    Ok(Err(ComponentFailure::ConicUnbounded { point, direction }))
                }
                _ => Err(Error::Defect("face LP unbounded but full LP is not".into())),
            }
        }
        Err(e) => Err(e),
    }
}

/// Builds the unified strong-duality certificate, or the labelled evidence
/// for the first component (integer, then real, then conic) that fails.
pub fn unified_certificate(p: &UnifiedProblem) -> Result<UnifiedOutcome> {
    p.check_dims()?;
    let (integer, (real, conic)) = par::join(
        || p.integer.as_ref().map(integer_component).transpose(),
        || {
            par::join(
                || p.real.as_ref().map(real_component).transpose(),
                || p.conic.as_ref().map(conic_component).transpose(),
            )
        },
    );
    let (integer, real, conic) = (integer?, real?, conic?);

    let mut cert = UnifiedCertificate {
        integer_part: None,
        face: None,
        slater_on_face: false,
        dual_multipliers: DualMultipliers::default(),
        primal_points: PrimalPoints::default(),
        primal_value: Rational::zero(),
        dual_value: Rational::zero(),
    };
    if let Some(part) = integer {
        let part = match part {
            Ok(part) => part,
            Err(f) => return Ok(UnifiedOutcome::Failed(f)),
        };
        let z = p.integer.as_ref().expect("component present");
        cert.primal_value += Rational::from_integer(zdot(&z.c, &part.x));
        cert.dual_value -= Rational::from_integer(zdot(&z.b, &part.lambda));
        cert.integer_part = Some(part.cert);
        cert.dual_multipliers.lambda_z = Some(part.lambda);
        cert.primal_points.x_z = Some(part.x);
    }
    if let Some(part) = real {
        let (x, lambda) = match part {
            Ok(part) => part,
            Err(f) => return Ok(UnifiedOutcome::Failed(f)),
        };
        let r = p.real.as_ref().expect("component present");
        cert.primal_value += dot(&r.c, &x);
        cert.dual_value -= dot(&r.b, &lambda);
        cert.dual_multipliers.lambda_r = lambda;
        cert.primal_points.x_r = x;
    }
    if let Some(part) = conic {
        let part = match part {
            Ok(part) => part,
            Err(f) => return Ok(UnifiedOutcome::Failed(f)),
        };
        cert.primal_value += part.dual.primal_value;
        cert.dual_value += part.dual.dual_value;
        cert.dual_multipliers.lambda_k = part.dual.lambda;
        cert.primal_points.x_k = part.dual.primal;
        cert.face = Some(part.face);
        // minimal_face only returns once the forced-zero set is empty
        cert.slater_on_face = true;
    }
    if cert.primal_value != cert.dual_value {
        return Err(Error::Defect(format!(
            "aggregate primal {} differs from dual {}",
            cert.primal_value, cert.dual_value
        )));
    }
    Ok(UnifiedOutcome::Certified(Box::new(cert)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::int;

    fn q(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn zv(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn face_of(a: &RationalMatrix, b: &[Rational]) -> FaceDescriptor {
        match minimal_face(a, b).unwrap() {
            MinimalFace::Face(f) => f,
            MinimalFace::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn face_examples() {
        let a = RationalMatrix::from_i64(&[&[1, 1]]);
        let f = face_of(&a, &q(&[0]));
        assert_eq!(f.zero_set, BTreeSet::from([0, 1]));
        assert_eq!(f.exposing_chain.len(), 1);
        assert!(f.exposing_chain[0].y.iter().all(|v| v.is_positive()));
        assert!(f.verify(&a, &q(&[0])));

        let f = face_of(&a, &q(&[1]));
        assert!(f.zero_set.is_empty() && f.exposing_chain.is_empty());

        let a = RationalMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        match minimal_face(&a, &q(&[0, 1])).unwrap() {
            MinimalFace::Infeasible(y) => {
                assert!(verify_farkas(&a, &q(&[0, 1]), &BTreeSet::from([0, 1]), &y))
            }
            MinimalFace::Face(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn reduced_dual_examples() {
        let a = RationalMatrix::from_i64(&[&[1, 1]]);
        let whole = FaceDescriptor::whole_orthant();
        let d = reduced_dual_solve(&a, &q(&[1]), &q(&[1, 0]), &whole).unwrap();
        assert_eq!((d.lambda.clone(), d.dual_value.clone()), (q(&[0]), int(0)));
        let d = reduced_dual_solve(&a, &q(&[1]), &q(&[1, 1]), &whole).unwrap();
        assert_eq!((d.lambda, d.dual_value, d.primal_value), (q(&[-1]), int(1), int(1)));
        let origin = face_of(&a, &q(&[0]));
        let d = reduced_dual_solve(&a, &q(&[0]), &q(&[5, -3]), &origin).unwrap();
        assert_eq!((d.primal_value, d.dual_value), (int(0), int(0)));
        let unbounded = reduced_dual_solve(
            &RationalMatrix::from_i64(&[&[1, -1]]),
            &q(&[0]),
            &q(&[-1, 0]),
            &whole,
        );
        assert_eq!(unbounded, Err(Error::Unbounded));
    }

    #[test]
    fn unified_integer_only() {
        let p = UnifiedProblem {
            integer: Some(IntegerBlock {
                a: IntegerMatrix::from_rows(&[[1]]).unwrap(),
                b: zv(&[1]),
                c: zv(&[-1]),
            }),
            ..Default::default()
        };
        let UnifiedOutcome::Certified(cert) = unified_certificate(&p).unwrap() else {
            panic!("expected certificate")
        };
        assert_eq!(cert.dual_multipliers.lambda_z, Some(zv(&[1])));
        assert_eq!((cert.primal_value.clone(), cert.dual_value.clone()), (int(-1), int(-1)));
        assert!(cert.verify(&p));

        let p = UnifiedProblem {
            integer: Some(IntegerBlock {
                a: IntegerMatrix::from_rows(&[[2]]).unwrap(),
                b: zv(&[1]),
                c: zv(&[-1]),
            }),
            ..Default::default()
        };
        match unified_certificate(&p).unwrap() {
            UnifiedOutcome::Failed(f @ ComponentFailure::IntegerTorsion(_)) => {
                let ComponentFailure::IntegerTorsion(c) = &f else { unreachable!() };
                assert_eq!(c.offending_factors, zv(&[2]));
                assert_eq!((f.component(), f.kind()), ("integer", "torsion"));
                assert!(f.verify(&p));
            }
            other => panic!("expected torsion failure, got {other:?}"),
        }
    }

    #[test]
    fn unified_conic_origin() {
        let p = UnifiedProblem {
            conic: Some(RationalBlock {
                a: RationalMatrix::from_i64(&[&[1, 1]]),
                b: q(&[0]),
                c: q(&[1, 1]),
            }),
            ..Default::default()
        };
        let UnifiedOutcome::Certified(cert) = unified_certificate(&p).unwrap() else {
            panic!("expected certificate")
        };
        assert_eq!(cert.face.as_ref().unwrap().zero_set, BTreeSet::from([0, 1]));
        assert_eq!((cert.primal_value.clone(), cert.dual_value.clone()), (int(0), int(0)));
        assert!(cert.slater_on_face);
        assert!(cert.verify(&p));
    }

    #[test]
    fn unified_all_components_and_failures() {
        let p = UnifiedProblem {
            integer: Some(IntegerBlock {
                a: IntegerMatrix::from_rows(&[[1, 1], [0, 1]]).unwrap(),
                b: zv(&[3, 1]),
                c: zv(&[2, 5]),
            }),
            real: Some(RationalBlock {
                a: RationalMatrix::from_i64(&[&[1, 2]]),
                b: q(&[4]),
                c: q(&[3, 6]),
            }),
            conic: Some(RationalBlock {
                a: RationalMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1]]),
                b: q(&[2, 1]),
                c: q(&[1, 3, 2]),
            }),
        };
        let UnifiedOutcome::Certified(cert) = unified_certificate(&p).unwrap() else {
            panic!("expected certificate")
        };
        assert!(cert.verify(&p));
        let mut tampered = (*cert).clone();
        tampered.dual_multipliers.lambda_r[0] += int(1);
        assert!(!tampered.verify(&p));

        let bad_real = UnifiedProblem {
            real: Some(RationalBlock {
                a: RationalMatrix::from_i64(&[&[1, 2]]),
                b: q(&[4]),
                c: q(&[1, 0]),
            }),
            ..Default::default()
        };
        match unified_certificate(&bad_real).unwrap() {
            UnifiedOutcome::Failed(f) => {
                assert_eq!((f.component(), f.kind()), ("real", "unbounded"));
                assert!(f.verify(&bad_real));
            }
            other => panic!("expected failure, got {other:?}"),
        }

        let bad_conic = UnifiedProblem {
            conic: Some(RationalBlock {
                a: RationalMatrix::from_i64(&[&[1, 1]]),
                b: q(&[-1]),
                c: q(&[0, 0]),
            }),
            ..Default::default()
        };
        match unified_certificate(&bad_conic).unwrap() {
            UnifiedOutcome::Failed(f) => {
                assert_eq!((f.component(), f.kind()), ("conic", "infeasible"));
                assert!(f.verify(&bad_conic));
            }
            other => panic!("expected failure, got {other:?}"),
        }

        let unbounded_conic = UnifiedProblem {
            conic: Some(RationalBlock {
                a: RationalMatrix::from_i64(&[&[1, -1]]),
                b: q(&[0]),
                c: q(&[-1, 0]),
            }),
            ..Default::default()
        };
        match unified_certificate(&unbounded_conic).unwrap() {
            UnifiedOutcome::Failed(f) => {
                assert_eq!(f.kind(), "unbounded");
                assert!(f.verify(&unbounded_conic));
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn dimension_errors() {
        let p = UnifiedProblem {
            conic: Some(RationalBlock {
                a: RationalMatrix::from_i64(&[&[1, 1]]),
                b: q(&[0, 1]),
                c: q(&[1, 1]),
            }),
            ..Default::default()
        };
        assert!(matches!(unified_certificate(&p), Err(Error::DimensionMismatch(_))));
    }
}
