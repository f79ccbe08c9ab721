//! One function per subcommand. Each embeds its input in the emitted
//! document so that `--recheck` can work from the document alone.

use ethic_dual::dynamics::{decay_report, ethic_entropy_profile, reversibility_check, MorphismChain};
use ethic_dual::facial::{
    unified_certificate, ComponentFailure, FaceDescriptor, UnifiedCertificate, UnifiedOutcome,
    UnifiedProblem,
};
use ethic_dual::graph::{
    canonical_divisor, dhar_reduce_with, is_q_reduced, laplacian, rank_certificate,
    reduced_laplacian_determinant, spanning_tree_count, Divisor, FiringStrategy, Graph,
    RankCertificate, DEFAULT_DEGREE_CAP,
};
use ethic_dual::homology::{cokernel as coker, FgAbelianGroup};
use ethic_dual::intdual::{
    adjoint_solve, discrete_farkas_with, torsion_certificate, FarkasConfig, FarkasOutcome,
    IntegerCertificate, ShiftLattice, DEFAULT_SHIFT_CAP,
};
use ethic_dual::linalg::{smith_normal_form, solve_integer, IntegerMatrix, SmithDecomposition};
use ethic_dual::lp::{lp_solve, LinearProgram, LpOutcome, LpStatus};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};
use crate::input;
use crate::json as j;

pub const SCHEMA: &str = "ethic-dual/1";
pub const CAP_ENV: &str = "ETHIC_DUAL_CAP";

/// A computed document before the envelope is added.
#[derive(Debug)]
pub struct Emission {
    pub command: &'static str,
    pub body: Map<String, Value>,
    pub verified: bool,
    /// Certified negative answer (infeasible, torsion, violation, ...).
    pub negative: bool,
}

impl Emission {
    fn new(command: &'static str, body: Value, verified: bool, negative: bool) -> Self {
        let Value::Object(body) = body else {
            unreachable!("bodies are JSON objects")
        };
        Self {
            command,
            body,
            verified,
            negative,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("schema".into(), json!(SCHEMA));
        doc.insert("command".into(), json!(self.command));
        doc.extend(self.body.clone());
        doc.insert("verified".into(), json!(self.verified));
        Value::Object(doc)
    }

    /// 0 computed, 1 certified negative; an unverifiable result is a defect.
    pub fn exit_code(&self) -> i32 {
        if !self.verified {
            2
        } else if self.negative {
            1
        } else {
            0
        }
    }
}

/// Explicit `--cap` wins, then `ETHIC_DUAL_CAP`, then the default.
pub fn resolve_cap(flag: Option<u128>, default: u128) -> CliResult<u128> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| {
            CliError::new("usage", format!("{CAP_ENV}=`{s}` is not a nonnegative integer"))
        }),
        Err(_) => Ok(default),
    }
}

fn degree_cap(flag: Option<u128>) -> CliResult<usize> {
    let cap = resolve_cap(flag, DEFAULT_DEGREE_CAP as u128)?;
    Ok(usize::try_from(cap).unwrap_or(usize::MAX))
}

pub fn snf_json(d: &SmithDecomposition) -> Value {
    json!({
        "invariant_factors": j::ints(&d.invariant_factors),
        "rank": d.rank(),
        "u": j::matrix(&d.u),
        "s": j::matrix(&d.s),
        "v": j::matrix(&d.v),
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

/// The group `coker A` read off a verified Smith form.
pub fn group_from_snf(a: &IntegerMatrix, d: &SmithDecomposition) -> CliResult<FgAbelianGroup> {
    Ok(FgAbelianGroup::new(a.rows() - d.rank(), d.torsion_factors())?)
}

pub fn snf(a: &IntegerMatrix) -> CliResult<Emission> {
    let d = smith_normal_form(a);
    let body = merge(json!({"input": {"matrix": j::matrix(a)}}), snf_json(&d));
    Ok(Emission::new("snf", body, d.verify(a), false))
}

pub fn cokernel(a: &IntegerMatrix) -> CliResult<Emission> {
    let g = coker(a);
    let d = smith_normal_form(a);
    let verified = d.verify(a) && group_from_snf(a, &d)? == g;
    let body = merge(
        json!({"input": {"matrix": j::matrix(a)}, "cokernel": j::group(&g)}),
        snf_json(&d),
    );
    Ok(Emission::new("cokernel", body, verified, false))
}

pub fn jacobian(g: &Graph) -> CliResult<Emission> {
    let jac = ethic_dual::graph::jacobian(g)?;
    let l = laplacian(g);
    let d = smith_normal_form(&l);
    let tau = reduced_laplacian_determinant(g, 0)?.abs();
    let verified = d.verify(&l)
        && group_from_snf(&l, &d)?.torsion_part() == jac
        && jac.torsion_order() == tau;
    let body = json!({
        "input": {"graph": j::graph(g)},
        "jacobian": j::group(&jac),
        "tau": j::int(&tau),
        "laplacian_snf": snf_json(&d),
    });
    Ok(Emission::new("jacobian", body, verified, false))
}

pub fn trees(g: &Graph) -> CliResult<Emission> {
    let tau = spanning_tree_count(g)?;
    let last = g.vertex_count() - 1;
    let verified = reduced_laplacian_determinant(g, last)?.abs() == tau;
    let body = json!({"input": {"graph": j::graph(g)}, "tau": j::int(&tau)});
    Ok(Emission::new("trees", body, verified, false))
}

pub fn strategy_name(s: FiringStrategy) -> &'static str {
    match s {
        FiringStrategy::Maximal => "maximal",
        FiringStrategy::Single => "single",
    }
}

/// `D - R = L f` and `R` passes the burning test.
pub fn reduction_holds(g: &Graph, d: &Divisor, r: &Divisor, f: &[BigInt], q: usize) -> CliResult<bool> {
    let lf = laplacian(g).mul_vec(f)?;
    Ok(lf == (d - r).to_bigints() && is_q_reduced(g, r, q)?)
}

pub fn reduce(g: &Graph, d: &Divisor, q: usize, strategy: FiringStrategy) -> CliResult<Emission> {
    let r = dhar_reduce_with(g, d, q, strategy)?;
    let firing = solve_integer(&laplacian(g), &(d - &r).to_bigints())?
        .ok_or_else(|| CliError::new("internal_defect", "reduction left the divisor class"))?
        .particular;
    let verified = reduction_holds(g, d, &r, &firing, q)?;
    let body = json!({
        "input": {"graph": j::graph(g), "divisor": j::small_ints(&d.values), "q": q, "strategy": strategy_name(strategy)},
        "reduced": j::small_ints(&r.values),
        "firing": j::ints(&firing),
        "equivalent_to_effective": r.values[q] >= 0,
    });
    Ok(Emission::new("reduce", body, verified, false))
}

fn rank_json(c: &RankCertificate) -> Value {
    json!({"rank": c.rank, "witness": j::small_ints(&c.witness.values)})
}

pub fn rank(g: &Graph, d: &Divisor, cap: Option<u128>) -> CliResult<Emission> {
    let cap = degree_cap(cap)?;
    let c = rank_certificate(g, d, cap)?;
    let verified = c.verify_upper_bound(g, d)?;
    let body = merge(
        json!({
            "input": {"graph": j::graph(g), "divisor": j::small_ints(&d.values), "degree_cap": cap},
            "degree": d.degree(),
        }),
        rank_json(&c),
    );
    Ok(Emission::new("rank", body, verified, false))
}

pub fn rr_check(g: &Graph, d: &Divisor, cap: Option<u128>) -> CliResult<Emission> {
    let cap = degree_cap(cap)?;
    let k = canonical_divisor(g);
    let complement = &k - d;
    let (c1, c2) = (rank_certificate(g, d, cap)?, rank_certificate(g, &complement, cap)?);
    let (lhs, rhs) = (c1.rank - c2.rank, d.degree() + 1 - g.genus());
    let verified = c1.verify_upper_bound(g, d)? && c2.verify_upper_bound(g, &complement)?;
    let body = json!({
        "input": {"graph": j::graph(g), "divisor": j::small_ints(&d.values), "degree_cap": cap},
        "canonical": j::small_ints(&k.values),
        "rank": rank_json(&c1),
        "rank_of_complement": rank_json(&c2),
        "degree": d.degree(),
        "genus": g.genus(),
        "lhs": lhs,
        "rhs": rhs,
        "holds": lhs == rhs,
    });
    Ok(Emission::new("rr-check", body, verified, lhs != rhs))
}

pub fn lattice_name(l: ShiftLattice) -> &'static str {
    match l {
        ShiftLattice::Box => "box",
        ShiftLattice::Reachable => "reachable",
    }
}

pub fn farkas_json(out: &FarkasOutcome) -> Value {
    json!({
        "feasible": out.feasible,
        "witness": j::opt(out.witness.as_deref(), j::ints),
        "separator": j::opt(out.separator.as_ref(), |s| {
            Value::Array(
                s.values
                    .iter()
                    .map(|(e, v)| json!({"monomial": e, "value": j::rat(v)}))
                    .collect(),
            )
        }),
    })
}

pub fn farkas(a: &IntegerMatrix, b: &[BigInt], cap: Option<u128>, lattice: ShiftLattice) -> CliResult<Emission> {
    let config = FarkasConfig {
        shift_cap: resolve_cap(cap, DEFAULT_SHIFT_CAP)?,
        lattice,
    };
    let out = discrete_farkas_with(a, b, &config)?;
    let verified = out.verify(a, b, &config)?;
    let body = merge(
        json!({
            "input": {
                "matrix": j::matrix(a),
                "rhs": j::ints(b),
                "shift_cap": config.shift_cap.to_string(),
                "lattice": lattice_name(lattice),
            },
        }),
        farkas_json(&out),
    );
    Ok(Emission::new("farkas", body, verified, !out.feasible))
}

pub fn integer_certificate_json(c: &IntegerCertificate) -> Value {
    merge(
        json!({
            "torsion_free": c.torsion_free,
            "offending_factors": j::ints(&c.offending_factors),
            "adjoint_multiplier": j::opt(c.adjoint_multiplier.as_deref(), j::ints),
        }),
        snf_json(&c.snf),
    )
}

pub fn intdual(a: &IntegerMatrix, cost: Option<&[BigInt]>) -> CliResult<Emission> {
    let mut cert = torsion_certificate(a);
    let mut adjoint_solvable = Value::Null;
    if let Some(c) = cost {
        cert.adjoint_multiplier = adjoint_solve(a, c)?;
        adjoint_solvable = json!(cert.adjoint_multiplier.is_some());
    }
    let verified = cert.verify(a, cost);
    let body = json!({
        "input": {"matrix": j::matrix(a), "cost": j::opt(cost, j::ints)},
        "certificate": integer_certificate_json(&cert),
        "adjoint_solvable": adjoint_solvable,
    });
    Ok(Emission::new("intdual", body, verified, !cert.torsion_free))
}

pub fn face_json(f: &FaceDescriptor) -> Value {
    json!({
        "zero_set": j::index_set(&f.zero_set),
        "exposing_chain": f.exposing_chain.iter().map(|s| json!({"y": j::rats(&s.y), "w": j::rats(&s.w)})).collect::<Vec<_>>(),
    })
}

pub fn unified_json(c: &UnifiedCertificate) -> Value {
    let m = &c.dual_multipliers;
    let x = &c.primal_points;
    json!({
        "integer_part": j::opt(c.integer_part.as_ref(), integer_certificate_json),
        "face": j::opt(c.face.as_ref(), face_json),
        "slater_on_face": c.slater_on_face,
        "dual_multipliers": {
            "lambda_z": j::opt(m.lambda_z.as_deref(), j::ints),
            "lambda_r": j::rats(&m.lambda_r),
            "lambda_k": j::rats(&m.lambda_k),
        },
        "primal_points": {
            "x_z": j::opt(x.x_z.as_deref(), j::ints),
            "x_r": j::rats(&x.x_r),
            "x_k": j::rats(&x.x_k),
        },
        "primal_value": j::rat(&c.primal_value),
        "dual_value": j::rat(&c.dual_value),
    })
}

pub fn failure_json(f: &ComponentFailure) -> Value {
    let evidence = match f {
        ComponentFailure::IntegerTorsion(c) => json!({"certificate": integer_certificate_json(c)}),
        ComponentFailure::IntegerInfeasible { certificate }
        | ComponentFailure::RealInfeasible { certificate }
        | ComponentFailure::ConicInfeasible { certificate } => json!({"certificate": j::rats(certificate)}),
        ComponentFailure::IntegerUnbounded { point, direction } => {
            json!({"point": j::ints(point), "direction": j::ints(direction)})
        }
        ComponentFailure::RealUnbounded { point, direction }
        | ComponentFailure::ConicUnbounded { point, direction } => {
            json!({"point": j::rats(point), "direction": j::rats(direction)})
        }
    };
    json!({"component": f.component(), "kind": f.kind(), "evidence": evidence})
}

pub fn certify(p: &UnifiedProblem) -> CliResult<Emission> {
    let input = input::problem_to_json(p);
    let (body, verified, negative) = match unified_certificate(p)? {
        UnifiedOutcome::Certified(c) => (
            json!({"input": input, "certified": true, "certificate": unified_json(&c)}),
            c.verify(p),
            false,
        ),
        UnifiedOutcome::Failed(f) => (
            json!({"input": input, "certified": false, "failure": failure_json(&f)}),
            f.verify(p),
            true,
        ),
    };
    Ok(Emission::new("certify", body, verified, negative))
}

/// Recomputes each prefix's Smith form and checks it against the report.
pub fn entropy_holds(chain: &MorphismChain, per_time: &[(Vec<BigInt>, BigInt)]) -> bool {
    let prefixes = chain.prefix_products();
    prefixes.len() == per_time.len()
        && prefixes.iter().zip(per_time).all(|(f, (factors, order))| {
            let d = smith_normal_form(f);
            d.verify(f)
                && d.torsion_factors() == *factors
                && factors.iter().product::<BigInt>() == *order
        })
}

pub fn entropy(chain: &MorphismChain) -> CliResult<Emission> {
    let report = ethic_entropy_profile(chain);
    let decay = decay_report(chain);
    let claims: Vec<(Vec<BigInt>, BigInt)> = report
        .per_time
        .iter()
        .map(|p| (p.memory.torsion_factors().to_vec(), p.torsion_order.clone()))
        .collect();
    let verified = entropy_holds(chain, &claims);
    let body = json!({
        "input": {"chain": input::chain_to_json(chain)},
        "per_time": report.per_time.iter().map(|p| json!({
            "t": p.t,
            "memory": j::group(&p.memory),
            "torsion_order": j::int(&p.torsion_order),
            "entropy": {"order": j::int(&p.entropy.order), "nats": p.entropy.nats, "display": format!("{:.6}", p.entropy.nats)},
        })).collect::<Vec<_>>(),
        "decay": decay.iter().map(|p| json!({
            "t": p.t,
            "nonincreasing_from_previous": p.nonincreasing_from_previous,
        })).collect::<Vec<_>>(),
    });
    Ok(Emission::new("entropy", body, verified, false))
}

pub fn reversible(f: &IntegerMatrix) -> CliResult<Emission> {
    let report = reversibility_check(f)?;
    let d = smith_normal_form(f);
    let verified = d.verify(f)
        && d.torsion_factors() == report.memory.torsion_factors()
        && report.reversible == d.torsion_factors().is_empty();
    let body = merge(
        json!({
            "input": {"matrix": j::matrix(f)},
            "reversible": report.reversible,
            "memory": j::group(&report.memory),
        }),
        snf_json(&d),
    );
    Ok(Emission::new("reversible", body, verified, !report.reversible))
}

pub fn status_name(s: LpStatus) -> &'static str {
    match s {
        LpStatus::Optimal => "optimal",
        LpStatus::Infeasible => "infeasible",
        LpStatus::Unbounded => "unbounded",
    }
}

pub fn lp_json(out: &LpOutcome) -> Value {
    json!({
        "status": status_name(out.status),
        "primal": j::opt(out.primal.as_deref(), j::rats),
        "dual": j::opt(out.dual.as_deref(), j::rats),
        "objective_value": j::opt(out.objective_value.as_ref(), j::rat),
        "infeasibility_certificate": j::opt(out.infeasibility_certificate.as_deref(), j::rats),
        "unbounded_ray": j::opt(out.unbounded_ray.as_deref(), j::rats),
    })
}

pub fn lp(p: &LinearProgram) -> CliResult<Emission> {
    let out = lp_solve(p)?;
    let body = merge(json!({"input": input::lp_to_json(p)}), lp_json(&out));
    Ok(Emission::new("lp", body, out.verify(p), out.status != LpStatus::Optimal))
}
