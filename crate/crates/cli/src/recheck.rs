//! Re-verification of an emitted document. Everything is rebuilt from the
//! embedded input and the claimed certificate; the stored `verified` flag is
//! ignored.

use ethic_dual::facial::{
    ComponentFailure, DualMultipliers, ExposingVector, FaceDescriptor, PrimalPoints,
    UnifiedCertificate,
};
use ethic_dual::graph::{
    canonical_divisor, rank_certificate, reduced_laplacian_determinant, Divisor, Graph,
    RankCertificate,
};
use ethic_dual::homology::cokernel;
use ethic_dual::intdual::{FarkasConfig, FarkasOutcome, IntegerCertificate, Separator, ShiftLattice};
use ethic_dual::linalg::{IntegerMatrix, SmithDecomposition};
use ethic_dual::lp::{LpOutcome, LpStatus};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::commands::{self, Emission, SCHEMA};
use crate::error::{CliError, CliResult};
use crate::input;
use crate::json::{self as j, field, opt_field};

fn snf_from(v: &Value, a: &IntegerMatrix) -> CliResult<SmithDecomposition> {
    Ok(SmithDecomposition {
        u: j::to_matrix(field(v, "u")?, Some(a.rows()))?,
        s: j::to_matrix(field(v, "s")?, Some(a.cols()))?,
        v: j::to_matrix(field(v, "v")?, Some(a.cols()))?,
        invariant_factors: j::to_ints(field(v, "invariant_factors")?)?,
    })
}

fn integer_certificate_from(v: &Value, a: &IntegerMatrix) -> CliResult<IntegerCertificate> {
    Ok(IntegerCertificate {
        snf: snf_from(v, a)?,
        torsion_free: j::to_bool(field(v, "torsion_free")?)?,
        offending_factors: j::to_ints(field(v, "offending_factors")?)?,
        adjoint_multiplier: opt_field(v, "adjoint_multiplier").map(j::to_ints).transpose()?,
    })
}

fn group_matches(v: &Value, factors: &[BigInt], free_rank: usize) -> CliResult<bool> {
    Ok(j::to_ints(field(v, "torsion_factors")?)? == factors
        && j::to_usize(field(v, "free_rank")?)? == free_rank)
}

fn graph_in(input: &Value) -> CliResult<Graph> {
    j::to_graph(field(input, "graph")?)
}

fn divisor_in(input: &Value) -> CliResult<Divisor> {
    j::to_divisor(field(input, "divisor")?)
}

fn rank_from(v: &Value) -> CliResult<RankCertificate> {
    Ok(RankCertificate {
        rank: j::to_small(field(v, "rank")?)?,
        witness: j::to_divisor(field(v, "witness")?)?,
    })
}

/// Witness check plus a fresh search for the lower bound.
fn rank_holds(g: &Graph, d: &Divisor, c: &RankCertificate, cap: usize) -> CliResult<bool> {
    Ok(c.verify_upper_bound(g, d)? && rank_certificate(g, d, cap)?.rank == c.rank)
}

fn face_from(v: &Value) -> CliResult<FaceDescriptor> {
    Ok(FaceDescriptor {
        zero_set: j::to_index_set(field(v, "zero_set")?)?,
        exposing_chain: j::array(field(v, "exposing_chain")?)?
            .iter()
            .map(|s| {
                Ok(ExposingVector {
                    y: j::to_rats(field(s, "y")?)?,
                    w: j::to_rats(field(s, "w")?)?,
                })
            })
            .collect::<CliResult<_>>()?,
    })
}

fn failure_from(v: &Value, p: &ethic_dual::facial::UnifiedProblem) -> CliResult<ComponentFailure> {
    let component = field(v, "component")?.as_str().unwrap_or_default();
    let kind = field(v, "kind")?.as_str().unwrap_or_default();
    let e = field(v, "evidence")?;
    let rats = |k: &str| -> CliResult<_> { j::to_rats(field(e, k)?) };
    Ok(match (component, kind) {
        ("integer", "torsion") => {
            let a = &p
                .integer
                .as_ref()
                .ok_or_else(|| CliError::new("schema", "torsion failure without an integer block"))?
                .a;
            ComponentFailure::IntegerTorsion(integer_certificate_from(field(e, "certificate")?, a)?)
        }
        ("integer", "infeasible") => ComponentFailure::IntegerInfeasible { certificate: rats("certificate")? },
        ("integer", "unbounded") => ComponentFailure::IntegerUnbounded {
            point: j::to_ints(field(e, "point")?)?,
            direction: j::to_ints(field(e, "direction")?)?,
        },
        ("real", "infeasible") => ComponentFailure::RealInfeasible { certificate: rats("certificate")? },
        ("real", "unbounded") => ComponentFailure::RealUnbounded {
            point: rats("point")?,
            direction: rats("direction")?,
        },
        ("conic", "infeasible") => ComponentFailure::ConicInfeasible { certificate: rats("certificate")? },
        ("conic", "unbounded") => ComponentFailure::ConicUnbounded {
            point: rats("point")?,
            direction: rats("direction")?,
        },
        _ => return Err(CliError::new("schema", format!("unknown failure {component}/{kind}"))),
    })
}

fn unified_from(v: &Value, p: &ethic_dual::facial::UnifiedProblem) -> CliResult<UnifiedCertificate> {
    let m = field(v, "dual_multipliers")?;
    let x = field(v, "primal_points")?;
    let integer_part = match (opt_field(v, "integer_part"), &p.integer) {
        (Some(c), Some(z)) => Some(integer_certificate_from(c, &z.a)?),
        (Some(_), None) => return Err(CliError::new("schema", "integer part without an integer block")),
        (None, _) => None,
    };
    Ok(UnifiedCertificate {
        integer_part,
        face: opt_field(v, "face").map(face_from).transpose()?,
        slater_on_face: j::to_bool(field(v, "slater_on_face")?)?,
        dual_multipliers: DualMultipliers {
            lambda_z: opt_field(m, "lambda_z").map(j::to_ints).transpose()?,
            lambda_r: j::to_rats(field(m, "lambda_r")?)?,
            lambda_k: j::to_rats(field(m, "lambda_k")?)?,
        },
        primal_points: PrimalPoints {
            x_z: opt_field(x, "x_z").map(j::to_ints).transpose()?,
            x_r: j::to_rats(field(x, "x_r")?)?,
            x_k: j::to_rats(field(x, "x_k")?)?,
        },
        primal_value: j::to_rat(field(v, "primal_value")?)?,
        dual_value: j::to_rat(field(v, "dual_value")?)?,
    })
}

fn lp_outcome_from(v: &Value) -> CliResult<LpOutcome> {
    let status = match field(v, "status")?.as_str() {
        Some("optimal") => LpStatus::Optimal,
        Some("infeasible") => LpStatus::Infeasible,
        Some("unbounded") => LpStatus::Unbounded,
        _ => return Err(CliError::new("schema", "unknown LP status")),
    };
    let rats = |k: &str| opt_field(v, k).map(j::to_rats).transpose();
    Ok(LpOutcome {
        status,
        primal: rats("primal")?,
        dual: rats("dual")?,
        objective_value: opt_field(v, "objective_value").map(j::to_rat).transpose()?,
        infeasibility_certificate: rats("infeasibility_certificate")?,
        unbounded_ray: rats("unbounded_ray")?,
    })
}

fn farkas_outcome_from(v: &Value) -> CliResult<FarkasOutcome> {
    let separator = opt_field(v, "separator")
        .map(|s| -> CliResult<Separator> {
            let values = j::array(s)?
                .iter()
                .map(|e| Ok((j::to_usizes(field(e, "monomial")?)?, j::to_rat(field(e, "value")?)?)))
                .collect::<CliResult<_>>()?;
            Ok(Separator { values })
        })
        .transpose()?;
    Ok(FarkasOutcome {
        feasible: j::to_bool(field(v, "feasible")?)?,
        witness: opt_field(v, "witness").map(j::to_ints).transpose()?,
        separator,
    })
}

/// Re-verifies one document; `Ok(false)` means the claim does not hold.
pub fn verify_document(doc: &Value) -> CliResult<bool> {
    if doc.get("schema") != Some(&json!(SCHEMA)) {
        return Err(CliError::new("schema", format!("expected schema {SCHEMA}")));
    }
    let command = field(doc, "command")?
        .as_str()
        .ok_or_else(|| CliError::new("schema", "`command` must be a string"))?;
    if command == "batch" {
        let mut all = true;
        for r in j::array(field(doc, "results")?)? {
            if let Some(d) = opt_field(r, "document").filter(|d| d.get("error").is_none()) {
                all &= verify_document(d)?;
            }
        }
        return Ok(all);
    }
    let inp = field(doc, "input")?;
    match command {
        "snf" => {
            let a = j::to_matrix(field(inp, "matrix")?, None)?;
            Ok(snf_from(doc, &a)?.verify(&a))
        }
        "cokernel" => {
            let a = j::to_matrix(field(inp, "matrix")?, None)?;
            let d = snf_from(doc, &a)?;
            Ok(d.verify(&a) && group_matches(field(doc, "cokernel")?, &d.torsion_factors(), a.rows() - d.rank())?)
        }
        "jacobian" => {
            let g = graph_in(inp)?;
            let l = ethic_dual::graph::laplacian(&g);
            let d = snf_from(field(doc, "laplacian_snf")?, &l)?;
            let tau = j::to_int(field(doc, "tau")?)?;
            Ok(d.verify(&l)
                && group_matches(field(doc, "jacobian")?, &d.torsion_factors(), 0)?
                && d.torsion_factors().iter().product::<BigInt>() == tau
                && reduced_laplacian_determinant(&g, 0)?.abs() == tau)
        }
        "trees" => {
            let g = graph_in(inp)?;
            let tau = j::to_int(field(doc, "tau")?)?;
            Ok(reduced_laplacian_determinant(&g, 0)?.abs() == tau)
        }
        "reduce" => {
            let (g, d) = (graph_in(inp)?, divisor_in(inp)?);
            let q = j::to_usize(field(inp, "q")?)?;
            let r = j::to_divisor(field(doc, "reduced")?)?;
            let f = j::to_ints(field(doc, "firing")?)?;
            r.check_len(&g)?;
            commands::reduction_holds(&g, &d, &r, &f, q)
        }
        "rank" => {
            let (g, d) = (graph_in(inp)?, divisor_in(inp)?);
            let cap = j::to_usize(field(inp, "degree_cap")?)?;
            rank_holds(&g, &d, &rank_from(doc)?, cap)
        }
        "rr-check" => {
            let (g, d) = (graph_in(inp)?, divisor_in(inp)?);
            let cap = j::to_usize(field(inp, "degree_cap")?)?;
            let complement = &canonical_divisor(&g) - &d;
            let (c1, c2) = (rank_from(field(doc, "rank")?)?, rank_from(field(doc, "rank_of_complement")?)?);
            let lhs = j::to_small(field(doc, "lhs")?)?;
            let rhs = j::to_small(field(doc, "rhs")?)?;
            let holds = j::to_bool(field(doc, "holds")?)?;
            Ok(rank_holds(&g, &d, &c1, cap)?
                && rank_holds(&g, &complement, &c2, cap)?
                && lhs == c1.rank - c2.rank
                && rhs == d.degree() + 1 - g.genus()
                && holds == (lhs == rhs))
        }
        "farkas" => {
            let a = j::to_matrix(field(inp, "matrix")?, None)?;
            let b = j::to_ints(field(inp, "rhs")?)?;
            let lattice = match field(inp, "lattice")?.as_str() {
                Some("reachable") => ShiftLattice::Reachable,
                _ => ShiftLattice::Box,
            };
            let shift_cap = j::to_int(field(inp, "shift_cap")?)?
                .try_into()
                .map_err(|_| CliError::new("schema", "shift cap out of range"))?;
            let config = FarkasConfig { shift_cap, lattice };
            Ok(farkas_outcome_from(doc)?.verify(&a, &b, &config)?)
        }
        "intdual" => {
            let a = j::to_matrix(field(inp, "matrix")?, None)?;
            let cost = opt_field(inp, "cost").map(j::to_ints).transpose()?;
            Ok(integer_certificate_from(field(doc, "certificate")?, &a)?.verify(&a, cost.as_deref()))
        }
        "certify" => {
            let p = input::problem_from_json(inp)?;
            if j::to_bool(field(doc, "certified")?)? {
                Ok(unified_from(field(doc, "certificate")?, &p)?.verify(&p))
            } else {
                Ok(failure_from(field(doc, "failure")?, &p)?.verify(&p))
            }
        }
        "entropy" => {
            let chain = input::chain_from_json(field(inp, "chain")?)?;
            let claims = j::array(field(doc, "per_time")?)?
                .iter()
                .map(|p| {
                    let factors = j::to_ints(field(field(p, "memory")?, "torsion_factors")?)?;
                    Ok((factors, j::to_int(field(p, "torsion_order")?)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(commands::entropy_holds(&chain, &claims))
        }
        "reversible" => {
            let f = j::to_matrix(field(inp, "matrix")?, None)?;
            let d = snf_from(doc, &f)?;
            let reversible = j::to_bool(field(doc, "reversible")?)?;
            Ok(d.verify(&f)
                && group_matches(field(doc, "memory")?, &d.torsion_factors(), 0)?
                && reversible == d.torsion_factors().is_empty()
                && cokernel(&f).torsion_part().torsion_factors() == d.torsion_factors())
        }
        "lp" => {
            let p = input::lp_from_json(inp)?;
            Ok(lp_outcome_from(doc)?.verify(&p))
        }
        other => Err(CliError::new("schema", format!("cannot recheck command `{other}`"))),
    }
}

pub fn recheck(doc: &Value) -> CliResult<Emission> {
    let target = doc.get("command").cloned().unwrap_or(Value::Null);
    let verified = verify_document(doc)?;
    let claimed = doc.get("verified").and_then(Value::as_bool);
    let body = json!({"target": target, "claimed": claimed});
    Ok(Emission {
        command: "recheck",
        body: body.as_object().cloned().unwrap_or_default(),
        verified,
        negative: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ethic_dual::linalg::IntegerMatrix;

    #[test]
    fn tampered_snf_is_rejected() {
        let a = IntegerMatrix::from_rows(&[[2, 4], [6, 8]]).unwrap();
        let doc = commands::snf(&a).unwrap().to_json();
        assert!(verify_document(&doc).unwrap());
        let mut bad = doc.clone();
        bad["invariant_factors"][1] = json!("8");
        assert!(!verify_document(&bad).unwrap());
        let mut bad = doc;
        bad["u"]["entries"][0][0] = json!("5");
        assert!(!verify_document(&bad).unwrap());
    }

    #[test]
    fn wrong_schema_is_an_error() {
        assert!(verify_document(&json!({"schema": "other/2", "command": "snf"})).is_err());
    }

    #[test]
    fn negative_sign_on_tau_is_rejected() {
        let g = Graph::complete(4);
        let mut doc = commands::trees(&g).unwrap().to_json();
        assert!(verify_document(&doc).unwrap());
        doc["tau"] = json!(j::int(&-BigInt::from(16)));
        assert!(!verify_document(&doc).unwrap());
    }
}
