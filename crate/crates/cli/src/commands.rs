//! Subcommand implementations. Each one takes parsed inputs and returns the
//! JSON value the binary prints.

use anyhow::{bail, Context, Result};
use num_traits::Zero;
use pindex_core::brauerhodge::{
    brauer_symbol_length, gabber_instance, hodge_locus_residual, hodge_theoretic_index, period as datum_period,
    symbol_length as class_symbol_length, GaussRat, HodgeDatum, IndexWitness, SiegelPoint,
};
use pindex_core::dtseries::{dt_positive, expand_dt};
use pindex_core::evenring::{char_pfaffian, fm_transform, igusa_discriminant, EvenClass, TwoClass};
use pindex_core::exactalg::{alt_type as form_type, pfaffian};
use pindex_core::pipeline::{self, run_pipeline, SearchConfig};
use pindex_core::tiltstab::{
    bg_inequality, bogomolov, central_charge_abcd, params_valid, reduce_along_h, slope_mu, tilt_slope_nu, Slope,
    StabParams,
};
use pindex_core::{Int, Mat, Rat};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cert;
use crate::json::{
    cubic_to_json, even_to_json, four_from_json, int_matrix_from_json, int_str, parse_int, rat_matrix_from_json,
    rat_matrix_to_json, rat_str, two_from_json, two_to_json, ClassMap, MatrixJson,
};

/// An alternating form given either as a full matrix or as a sparse class.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormJson {
    Matrix(MatrixJson),
    Class(ClassMap),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatumJson {
    /// Integral numerator `b` of `B = b / n`.
    pub b: ClassMap,
    pub n: String,
    #[serde(default)]
    pub ns2: Vec<ClassMap>,
    #[serde(default)]
    pub hdg4: Vec<ClassMap>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SiegelJson {
    pub re: MatrixJson,
    pub im: MatrixJson,
}

pub fn datum_from_json(d: &DatumJson) -> Result<HodgeDatum> {
    let ns2 = d.ns2.iter().map(two_from_json).collect::<Result<Vec<_>, _>>()?;
    let hdg4 = d.hdg4.iter().map(four_from_json).collect::<Result<Vec<_>, _>>()?;
    Ok(HodgeDatum::new(&two_from_json(&d.b)?, parse_int(&d.n)?, ns2, hdg4)?)
}

fn form_int_matrix(f: &FormJson) -> Result<Mat<Int>> {
    match f {
        FormJson::Matrix(m) => Ok(int_matrix_from_json(m)?),
        FormJson::Class(c) => two_from_json(c)?.to_int_matrix().context("class is not integral"),
    }
}

fn slope_json(s: &Slope) -> Value {
    match s {
        Slope::Finite(r) => json!(rat_str(r)),
        Slope::Infinity => json!("+inf"),
    }
}

pub fn igusa(v: &EvenClass) -> Value {
    json!({ "delta": rat_str(&igusa_discriminant(v)) })
}

pub fn fm(v: &EvenClass) -> Value {
    json!(even_to_json(&fm_transform(v)))
}

pub fn char_pf(u: &TwoClass, h: &TwoClass) -> Result<Value> {
    let cp = char_pfaffian(u, h)?;
    let cubic = cp.cubic();
    Ok(json!({
        "interpolated": cubic_to_json(&cp.interpolated),
        "closed": cubic_to_json(&cp.closed),
        "discriminant": rat_str(&cubic.discriminant()),
        "positive_real_roots": cubic.positive_real_roots()?,
    }))
}

pub fn alt_type(f: &FormJson) -> Result<Value> {
    let m = form_int_matrix(f)?;
    let t = form_type(&m)?;
    let pf = pfaffian(&m.to_rat())?;
    Ok(json!({
        "factors": t.factors.iter().map(int_str).collect::<Vec<_>>(),
        "rank": t.rank,
        "pfaffian": rat_str(&pf),
    }))
}

pub fn dt_table(d_max: usize, format: &str) -> Result<String> {
    let table = expand_dt(d_max);
    match format {
        "tsv" => {
            let mut out = String::from("d\tn\tdt\n");
            for (d, n, v) in table.entries() {
                out.push_str(&format!("{d}\t{n}\t{v}\n"));
            }
            Ok(out)
        }
        "json" => {
            let rows: Vec<Value> =
                table.entries().into_iter().map(|(d, n, v)| json!({ "d": d, "n": n, "dt": int_str(&v) })).collect();
            Ok(serde_json::to_string_pretty(&rows)?)
        }
        other => bail!("unknown format {other:?}, expected tsv or json"),
    }
}

pub fn dt_check(d: &Int, n: &Int) -> Value {
    json!(cert::dt_verdict_json(&dt_positive(d, n)))
}

fn witness_json(w: &IndexWitness, d: &HodgeDatum) -> Value {
    json!({
        "n": int_str(&w.n),
        "h1_coeffs": w.h1_coeffs.iter().map(rat_str).collect::<Vec<_>>(),
        "h2_coeffs": w.h2_coeffs.iter().map(rat_str).collect::<Vec<_>>(),
        "lambda": two_to_json(&w.lambda),
        "verified": w.verify(d),
    })
}

pub fn hodge_index(d: &HodgeDatum) -> Result<Value> {
    let per = datum_period(d)?;
    let w = hodge_theoretic_index(d)?;
    Ok(json!({
        "period": int_str(&per),
        "index": int_str(&w.n),
        "witness": witness_json(&w, d),
    }))
}

pub fn period(d: &HodgeDatum) -> Result<Value> {
    Ok(json!({ "period": int_str(&datum_period(d)?) }))
}

pub fn gabber(ell: u64) -> Result<Value> {
    let d = gabber_instance(ell)?;
    let mut out = hodge_index(&d)?;
    out["ell"] = json!(ell);
    out["b"] = json!(two_to_json(&d.numerator()));
    Ok(out)
}

pub fn symbol_length(theta: &TwoClass, n: u64, ns: &[TwoClass], cap: u64) -> Result<Value> {
    let own = class_symbol_length(theta, n)?;
    let mut out = json!({ "n": n, "symbol_length": own });
    if !ns.is_empty() {
        let res = brauer_symbol_length(theta, ns, n, cap)?;
        out["brauer_symbol_length"] = json!(res.length);
        out["representative"] = json!(two_to_json(&res.representative));
        out["index_bound"] = json!(int_str(&res.index_bound));
    }
    Ok(out)
}

pub fn siegel_from_json(z: &SiegelJson) -> Result<SiegelPoint> {
    let re = rat_matrix_from_json(&z.re)?;
    let im = rat_matrix_from_json(&z.im)?;
    if re.rows() != im.rows() || re.cols() != im.cols() {
        bail!("real and imaginary parts differ in shape");
    }
    let m = Mat::from_fn(re.rows(), re.cols(), |i, j| GaussRat::new(re.get(i, j).clone(), im.get(i, j).clone()));
    Ok(SiegelPoint::new(m)?)
}

pub fn hodge_locus(m: &Mat<Rat>, z: &SiegelPoint) -> Result<Value> {
    let res = hodge_locus_residual(m, z)?;
    let zero = res.data().iter().all(Zero::is_zero);
    Ok(json!({
        "residual": {
            "re": rat_matrix_to_json(&res.map(|x| x.re.clone())),
            "im": rat_matrix_to_json(&res.map(|x| x.im.clone())),
        },
        "zero": zero,
    }))
}

pub fn stab(v: &EvenClass, h: &TwoClass, p: &StabParams) -> Result<Value> {
    let q = reduce_along_h(v, h, &p.b)?;
    let untwisted = reduce_along_h(v, h, &Rat::zero())?;
    let bog = bogomolov(&q);
    let z = central_charge_abcd(&untwisted, p);
    Ok(json!({
        "quadruple": [rat_str(&q.q0), rat_str(&q.q1), rat_str(&q.q2), rat_str(&q.q3)],
        "mu": slope_json(&slope_mu(&q)),
        "nu": slope_json(&tilt_slope_nu(&q, &p.a)),
        "bogomolov": { "value": rat_str(&bog.value), "nonnegative": bog.nonnegative },
        "central_charge": { "re": rat_str(&z.re), "im": rat_str(&z.im) },
        "params_valid": params_valid(p),
        "bg_inequality": bg_inequality(&q, &p.a),
    }))
}

pub fn run(n: &Int, h_type: &[Int; 3], theta: &TwoClass, seed: u64) -> Result<pipeline::PipelineCertificate> {
    Ok(run_pipeline(n, h_type, theta, &SearchConfig::with_seed(seed))?)
}

pub fn verify(c: &pipeline::PipelineCertificate) -> Value {
    let records = pipeline::verify(c);
    let passed = records.len() == pipeline::Stage::ALL.len() && records.iter().all(|r| r.passed);
    json!({
        "passed": passed,
        "stages": records.iter().map(cert::stage_to_json).collect::<Vec<_>>(),
    })
}
