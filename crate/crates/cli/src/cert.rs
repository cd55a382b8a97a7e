//! Serialized pipeline certificates.

use pindex_core::dtseries::DtVerdict;
use pindex_core::pipeline::{
    AvoidanceRecord, ClassChain, LiftRecord, OrbitRecord, PipelineCertificate, PrimeCheck, Stage, StageRecord,
    SCHEMA_VERSION,
};
use serde::{Deserialize, Serialize};

use crate::json::{
    cubic_from_json, cubic_to_json, even_from_json, even_to_json, four_from_json, four_to_json, int_matrix_from_json,
    int_matrix_to_json, int_str, parse_int, parse_rat, rat_str, two_from_json, two_to_json, ClassMap, CodecError,
    CubicJson, EvenClassJson, MatrixJson,
};

#[derive(Debug, thiserror::Error)]
pub enum CertError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("unsupported schema version {0}, expected {SCHEMA_VERSION}")]
    Schema(u32),
    #[error("unknown stage {0:?}")]
    Stage(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftJson {
    pub u0: ClassMap,
    pub ell: u64,
    pub cubic: CubicJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub level: String,
    pub x: String,
    pub y: String,
    pub z: String,
    pub pre: Option<MatrixJson>,
    pub g: MatrixJson,
    pub u: ClassMap,
    pub cubic: CubicJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCheckJson {
    pub p: u64,
    pub nonzero: bool,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceJson {
    pub a: String,
    pub k: u32,
    pub z: ClassMap,
    pub beta: ClassMap,
    pub d: String,
    pub coefficient_gcd: String,
    pub primes: Vec<PrimeCheckJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub v0: EvenClassJson,
    pub w0: EvenClassJson,
    pub line_bundle: ClassMap,
    pub reduced: EvenClassJson,
    pub curve_n: String,
    pub delta_v0: String,
    pub delta_w0: String,
    pub delta_reduced: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtJson {
    pub d: String,
    pub n: String,
    pub delta: String,
    pub delta_nonnegative: bool,
    pub dt: Option<String>,
    pub witness: Option<[String; 2]>,
    pub positive: bool,
    pub implication_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageJson {
    pub stage: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub schema_version: u32,
    pub n: String,
    pub h_type: [String; 3],
    pub seed: u64,
    pub theta: ClassMap,
    pub lift: Option<LiftJson>,
    pub orbit: Option<OrbitJson>,
    pub avoidance: Option<AvoidanceJson>,
    pub chain: Option<ChainJson>,
    pub dt: Option<DtJson>,
    pub stages: Vec<StageJson>,
    pub search_replaced: Vec<String>,
}

pub fn stage_to_json(s: &StageRecord) -> StageJson {
    StageJson { stage: s.stage.name().to_string(), passed: s.passed, detail: s.detail.clone() }
}

fn stage_from_json(s: &StageJson) -> Result<StageRecord, CertError> {
    let stage = Stage::from_name(&s.stage).ok_or_else(|| CertError::Stage(s.stage.clone()))?;
    Ok(StageRecord { stage, passed: s.passed, detail: s.detail.clone() })
}

fn dt_to_json(v: &DtVerdict) -> DtJson {
    DtJson {
        d: int_str(&v.d),
        n: int_str(&v.n),
        delta: rat_str(&v.delta),
        delta_nonnegative: v.delta_nonnegative,
        dt: v.dt.as_ref().map(int_str),
        witness: v.witness.as_ref().map(|(a, b)| [int_str(a), int_str(b)]),
        positive: v.positive,
        implication_holds: v.implication_holds,
    }
}

fn dt_from_json(v: &DtJson) -> Result<DtVerdict, CodecError> {
    Ok(DtVerdict {
        d: parse_int(&v.d)?,
        n: parse_int(&v.n)?,
        delta: parse_rat(&v.delta)?,
        delta_nonnegative: v.delta_nonnegative,
        dt: v.dt.as_deref().map(parse_int).transpose()?,
        witness: v.witness.as_ref().map(|[a, b]| Ok::<_, CodecError>((parse_int(a)?, parse_int(b)?))).transpose()?,
        positive: v.positive,
        implication_holds: v.implication_holds,
    })
}

pub fn dt_verdict_json(v: &DtVerdict) -> DtJson {
    dt_to_json(v)
}

pub fn to_json(c: &PipelineCertificate) -> CertificateJson {
    CertificateJson {
        schema_version: c.schema_version,
        n: int_str(&c.n),
        h_type: [int_str(&c.h_type[0]), int_str(&c.h_type[1]), int_str(&c.h_type[2])],
        seed: c.seed,
        theta: two_to_json(&c.theta),
        lift: c.lift.as_ref().map(|l| LiftJson { u0: two_to_json(&l.u0), ell: l.ell, cubic: cubic_to_json(&l.cubic) }),
        orbit: c.orbit.as_ref().map(|o| OrbitJson {
            level: int_str(&o.level),
            x: int_str(&o.x),
            y: int_str(&o.y),
            z: int_str(&o.z),
            pre: o.pre.as_ref().map(int_matrix_to_json),
            g: int_matrix_to_json(&o.g),
            u: two_to_json(&o.u),
            cubic: cubic_to_json(&o.cubic),
        }),
        avoidance: c.avoidance.as_ref().map(|a| AvoidanceJson {
            a: int_str(&a.a),
            k: a.k,
            z: four_to_json(&a.z),
            beta: two_to_json(&a.beta),
            d: int_str(&a.d),
            coefficient_gcd: int_str(&a.coefficient_gcd),
            primes: a.primes.iter().map(|p| PrimeCheckJson { p: p.p, nonzero: p.nonzero, rank: p.rank }).collect(),
        }),
        chain: c.chain.as_ref().map(|ch| ChainJson {
            v0: even_to_json(&ch.v0),
            w0: even_to_json(&ch.w0),
            line_bundle: two_to_json(&ch.line_bundle),
            reduced: even_to_json(&ch.reduced),
            curve_n: int_str(&ch.curve_n),
            delta_v0: rat_str(&ch.delta_v0),
            delta_w0: rat_str(&ch.delta_w0),
            delta_reduced: rat_str(&ch.delta_reduced),
        }),
        dt: c.dt.as_ref().map(dt_to_json),
        stages: c.stages.iter().map(stage_to_json).collect(),
        search_replaced: c.search_replaced.clone(),
    }
}

pub fn from_json(c: &CertificateJson) -> Result<PipelineCertificate, CertError> {
    if c.schema_version != SCHEMA_VERSION {
        return Err(CertError::Schema(c.schema_version));
    }
    let lift = c
        .lift
        .as_ref()
        .map(|l| -> Result<_, CodecError> {
            Ok(LiftRecord { u0: two_from_json(&l.u0)?, ell: l.ell, cubic: cubic_from_json(&l.cubic)? })
        })
        .transpose()?;
    let orbit = c
        .orbit
        .as_ref()
        .map(|o| -> Result<_, CodecError> {
            Ok(OrbitRecord {
                level: parse_int(&o.level)?,
                x: parse_int(&o.x)?,
                y: parse_int(&o.y)?,
                z: parse_int(&o.z)?,
                pre: o.pre.as_ref().map(int_matrix_from_json).transpose()?,
                g: int_matrix_from_json(&o.g)?,
                u: two_from_json(&o.u)?,
                cubic: cubic_from_json(&o.cubic)?,
            })
        })
        .transpose()?;
    let avoidance = c
        .avoidance
        .as_ref()
        .map(|a| -> Result<_, CodecError> {
            Ok(AvoidanceRecord {
                a: parse_int(&a.a)?,
                k: a.k,
                z: four_from_json(&a.z)?,
                beta: two_from_json(&a.beta)?,
                d: parse_int(&a.d)?,
                coefficient_gcd: parse_int(&a.coefficient_gcd)?,
                primes: a.primes.iter().map(|p| PrimeCheck { p: p.p, nonzero: p.nonzero, rank: p.rank }).collect(),
            })
        })
        .transpose()?;
    let chain = c
        .chain
        .as_ref()
        .map(|ch| -> Result<_, CodecError> {
            Ok(ClassChain {
                v0: even_from_json(&ch.v0)?,
                w0: even_from_json(&ch.w0)?,
                line_bundle: two_from_json(&ch.line_bundle)?,
                reduced: even_from_json(&ch.reduced)?,
                curve_n: parse_int(&ch.curve_n)?,
                delta_v0: parse_rat(&ch.delta_v0)?,
                delta_w0: parse_rat(&ch.delta_w0)?,
                delta_reduced: parse_rat(&ch.delta_reduced)?,
            })
        })
        .transpose()?;
    Ok(PipelineCertificate {
        schema_version: c.schema_version,
        n: parse_int(&c.n)?,
        h_type: [parse_int(&c.h_type[0])?, parse_int(&c.h_type[1])?, parse_int(&c.h_type[2])?],
        seed: c.seed,
        theta: two_from_json(&c.theta)?,
        lift,
        orbit,
        avoidance,
        chain,
        dt: c.dt.as_ref().map(dt_from_json).transpose()?,
        stages: c.stages.iter().map(stage_from_json).collect::<Result<_, _>>()?,
        search_replaced: c.search_replaced.clone(),
    })
}

pub fn to_string(c: &PipelineCertificate) -> String {
    serde_json::to_string_pretty(&to_json(c)).expect("certificate serializes")
}

pub fn from_str(s: &str) -> anyhow::Result<PipelineCertificate> {
    let j: CertificateJson = serde_json::from_str(s)?;
    Ok(from_json(&j)?)
}
