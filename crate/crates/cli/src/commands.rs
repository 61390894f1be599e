use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use ctensor::admm::{multi_start, AdmmParams};
use ctensor::hypergraph::{adjacency_tensor, laplacian, signless_laplacian, HypergraphDoc};
use ctensor::io::TensorInput;
use ctensor::moments::{moment_tensor, ProcessSample};
use ctensor::psd::{
    check_psd, check_psd_dense, Certificate, Decision, PsdMode, PsdOptions, PsdVerdict,
};
use ctensor::special_root::diag_root_psd;
use ctensor::spectral::{self, ExtremeEigenvalue, GershgorinDisc};
use ctensor::structure::{self, classify_sign, SignClass};
use ctensor::tensor::{index, is_circulant, is_toeplitz, matrix_product};
use ctensor::{DenseTensor, ShiftPermutation, Tensor};
use serde::Serialize;

use crate::output::{float, json, Table};

/// Bad input exits with 2, anything else that stops a run with 1.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<ctensor::Error> for CliError {
    fn from(e: ctensor::Error) -> Self {
        match e {
            ctensor::Error::BudgetExceeded { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A finished command: its JSON document and the same content as a table.
pub struct Report {
    pub json: Vec<u8>,
    pub table: Table,
}

pub struct Ctx {
    pub budget: usize,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn load_tensor(path: &Path) -> CliResult<TensorInput> {
    TensorInput::parse(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn one_based(idx: &[usize]) -> Vec<String> {
    idx.iter().map(|j| (j + 1).to_string()).collect()
}

fn index_header(prefix: &str, count: usize) -> Vec<String> {
    let mut h: Vec<String> = (1..=count).map(|l| format!("{prefix}{l}")).collect();
    h.push("value".into());
    h
}

#[derive(Serialize)]
struct Lambda {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct EigReport {
    lambdas: Vec<Lambda>,
    gershgorin: GershgorinDisc,
    extreme: Option<ExtremeEigenvalue>,
}

pub fn eig(path: &Path) -> CliResult<Report> {
    let input = load_tensor(path)?;
    let a = input.to_circulant()?.ok_or_else(|| {
        CliError::Input(format!("{}: eig needs a circulant tensor", path.display()))
    })?;
    let s = spectral::native_eigenvalues(&a);
    let report = EigReport {
        lambdas: s
            .lambdas
            .iter()
            .map(|l| Lambda { re: l.re, im: l.im })
            .collect(),
        gershgorin: spectral::gershgorin(&a),
        extreme: spectral::extreme_h_eigenvalue(&a),
    };
    let mut table = Table::new(["k", "re", "im"]);
    for (k, l) in report.lambdas.iter().enumerate() {
        table.push(vec![k.to_string(), float(l.re), float(l.im)]);
    }
    Ok(Report {
        json: json(&report),
        table,
    })
}

#[derive(Serialize)]
struct ClassifyReport {
    sign: SignClass,
    /// Sign class of the root with its diagonal entry zeroed.
    associated_sign: Option<SignClass>,
    b0: bool,
    b: bool,
    circulant: bool,
    doubly_circulant: bool,
    toeplitz: bool,
    symmetric: bool,
}

pub fn classify(path: &Path, ctx: &Ctx) -> CliResult<Report> {
    let input = load_tensor(path)?;
    let dense = input.to_dense(ctx.budget)?;
    let circ = input.to_circulant()?;
    let b = match &circ {
        Some(a) => structure::b_class_circulant(a),
        None => structure::b_class_general(&dense),
    };
    let report = ClassifyReport {
        sign: classify_sign(&dense),
        associated_sign: circ.as_ref().map(|a| classify_sign(&a.associated())),
        b0: b.is_b0,
        b: b.is_b,
        circulant: circ.is_some(),
        doubly_circulant: circ
            .as_ref()
            .is_some_and(|a| structure::is_doubly_circulant(a, 0.0)),
        toeplitz: is_toeplitz(&dense, 0.0),
        symmetric: dense.is_symmetric(0.0),
    };
    let value = serde_json::to_value(&report).expect("plain data");
    let mut table = Table::new(["property", "value"]);
    for (k, v) in value.as_object().expect("struct") {
        let text = match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        table.push(vec![k.clone(), text]);
    }
    Ok(Report {
        json: json(&report),
        table,
    })
}

#[derive(Serialize)]
struct Evidence<'a> {
    witness_value: Option<f64>,
    details: &'a BTreeMap<String, f64>,
    trail: &'a [String],
}

#[derive(Serialize)]
struct PsdReport<'a> {
    decision: Decision,
    certificate: Option<Certificate>,
    witness: Option<&'a [f64]>,
    evidence: Evidence<'a>,
}

pub struct PsdArgs {
    pub numeric: bool,
    pub seed: u64,
    pub restarts: usize,
}

pub fn psd_verdict(input: &TensorInput, args: &PsdArgs, ctx: &Ctx) -> CliResult<PsdVerdict> {
    let mut opts = if args.numeric {
        PsdOptions::with_numeric(args.seed)
    } else {
        PsdOptions::default()
    };
    opts.restarts = args.restarts;
    opts.budget = ctx.budget;
    let verdict = match input {
        TensorInput::DiagRoot(spec) => {
            let v = diag_root_psd(spec)?;
            if v.is_decisive() || opts.mode == PsdMode::CertificatesOnly {
                v
            } else {
                check_psd(&spec.expand(), &opts)?
            }
        }
        TensorInput::Circulant(a) => check_psd(a, &opts)?,
        TensorInput::Dense(t) => check_psd_dense(t, &opts)?,
    };
    Ok(verdict)
}

pub fn psd(path: &Path, args: &PsdArgs, ctx: &Ctx) -> CliResult<Report> {
    let input = load_tensor(path)?;
    let v = psd_verdict(&input, args, ctx)?;
    let report = PsdReport {
        decision: v.decision,
        certificate: v.certificate,
        witness: v.witness.as_deref(),
        evidence: Evidence {
            witness_value: v.witness_value,
            details: &v.details,
            trail: &v.trail,
        },
    };
    let value = serde_json::to_value(&report).expect("plain data");
    let mut table = Table::new(["field", "value"]);
    table.push(vec![
        "decision".into(),
        value["decision"].as_str().unwrap_or("").into(),
    ]);
    table.push(vec![
        "certificate".into(),
        value["certificate"].as_str().unwrap_or("").into(),
    ]);
    if let Some(w) = &v.witness {
        table.push(vec![
            "witness".into(),
            w.iter().map(|x| float(*x)).collect::<Vec<_>>().join(" "),
        ]);
    }
    if let Some(wv) = v.witness_value {
        table.push(vec!["witness_value".into(), float(wv)]);
    }
    for (k, d) in &v.details {
        table.push(vec![k.clone(), float(*d)]);
    }
    Ok(Report {
        json: json(&report),
        table,
    })
}

#[derive(Serialize)]
struct MinimizeReport {
    best_value: f64,
    point: Vec<f64>,
    iterations_mean: f64,
    converged: usize,
    restarts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_mean_ms: Option<f64>,
    success_rate: Option<f64>,
    params: AdmmParams,
}

pub struct MinimizeArgs {
    pub params: AdmmParams,
    pub restarts: usize,
    pub reference: Option<f64>,
    pub timing: bool,
}

pub fn minimize(path: &Path, args: &MinimizeArgs, ctx: &Ctx) -> CliResult<Report> {
    let input = load_tensor(path)?;
    let dense = input.to_dense(ctx.budget)?;
    let r = multi_start(&dense, &args.params, args.restarts, args.reference)?;
    let report = MinimizeReport {
        best_value: r.best.value,
        point: r.best.point.clone(),
        iterations_mean: r.iterations_mean,
        converged: r.converged,
        restarts: args.restarts,
        time_mean_ms: args.timing.then_some(r.time_mean_ms),
        success_rate: r.success_rate,
        params: args.params,
    };
    let mut table = Table::new(["restart", "value"]);
    for (i, v) in r.values.iter().enumerate() {
        table.push(vec![i.to_string(), float(*v)]);
    }
    Ok(Report {
        json: json(&report),
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum HypergraphTensor {
    Adjacency,
    Laplacian,
    Signless,
}

#[derive(Serialize)]
struct HypergraphReport {
    n: usize,
    m: usize,
    directed: bool,
    edges: Vec<Vec<usize>>,
    degree: usize,
    which: HypergraphTensor,
    tensor: TensorInput,
}

pub fn hypergraph(path: &Path, which: HypergraphTensor) -> CliResult<Report> {
    let doc = HypergraphDoc::parse(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let g = doc.build()?;
    let t = match which {
        HypergraphTensor::Adjacency => adjacency_tensor(&g),
        HypergraphTensor::Laplacian => laplacian(&g),
        HypergraphTensor::Signless => signless_laplacian(&g),
    };
    let mut table = Table::new(index_header("j", g.m() - 1));
    index::for_each_index(g.m() - 1, g.n(), |idx| {
        let mut row = one_based(idx);
        row.push(float(t.root().at(idx)));
        table.push(row);
    });
    let report = HypergraphReport {
        n: g.n(),
        m: g.m(),
        directed: g.directed(),
        edges: g.edges().map(<[usize]>::to_vec).collect(),
        degree: g.degree(),
        which,
        tensor: TensorInput::Circulant(t),
    };
    Ok(Report {
        json: json(&report),
        table,
    })
}

/// One trajectory per CSV row, no header.
pub fn read_samples(path: &Path, period: usize) -> CliResult<ProcessSample> {
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let row = rec
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_empty())
            .map(|(c, f)| {
                f.parse::<f64>().map_err(|_| {
                    CliError::Input(format!(
                        "{}: row {}, column {}: not a number: {f:?}",
                        path.display(),
                        r + 1,
                        c + 1
                    ))
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        if !row.is_empty() {
            rows.push(row);
        }
    }
    ProcessSample::new(rows, period)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct MomentsReport {
    order: usize,
    period: usize,
    trajectories: usize,
    /// Largest change of an entry under one cyclic shift of all indices;
    /// zero exactly for circulant tensors.
    max_shift_deviation: f64,
    tensor: TensorInput,
}

pub fn moments(path: &Path, order: usize, period: usize, ctx: &Ctx) -> CliResult<Report> {
    let sample = read_samples(path, period)?;
    let needed = (period as u128)
        .checked_pow(order as u32)
        .unwrap_or(u128::MAX);
    if needed > ctx.budget as u128 {
        return Err(ctensor::Error::BudgetExceeded {
            needed,
            budget: ctx.budget,
        }
        .into());
    }
    let m = moment_tensor(&sample, order)?;
    let p = ShiftPermutation::new(period).matrix();
    let shifted: DenseTensor = matrix_product(&m, &p, ctx.budget)?;
    let deviation = shifted.max_abs_diff(&m)?;
    debug_assert_eq!(deviation == 0.0, is_circulant(&m, 0.0));

    let mut table = Table::new(index_header("i", order));
    index::for_each_index(order, period, |idx| {
        let mut row = one_based(idx);
        row.push(float(m.at(idx)));
        table.push(row);
    });
    let report = MomentsReport {
        order,
        period,
        trajectories: sample.len(),
        max_shift_deviation: deviation,
        tensor: TensorInput::Dense(m),
    };
    Ok(Report {
        json: json(&report),
        table,
    })
}
