use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use wharf::anomaly::{analyze_sequence, integral_at_period, integrality_verdict};
use wharf::category::{compile, validate_category, FSymbols, FusionRing};
use wharf::fib::build_fib_wha;
use wharf::formats::{parse_sequence, to_json_string, write_ctf, DenseTensor, FSymbolsJson, FusionJson, WhaJson};
use wharf::mpo::{check_dagger_dual, check_fusion};
use wharf::numerics::C64;
use wharf::rfp::{RfpLab, DENSE_MAX_LENGTH};
use wharf::symmetry::{MpoSymmetry, DEFAULT_SEED};
use wharf::wha::{verify_axioms, Axiom, WhaTable};
use wharf::Error;

use crate::report::{InputDigest, VerificationReport};
use crate::{Cli, Command, FibKind};

/// A message and the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Json(_) | Error::InvalidInput(_) | Error::Shape(_) | Error::Size { .. } => 2,
            Error::Unsupported(_)
            | Error::Compile { .. }
            | Error::NoConvergence { .. }
            | Error::Decomposition { .. }
            | Error::OrderExceeded { .. } => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl Failure {
    fn context(role: &str, path: &Path) -> impl FnOnce(Error) -> Failure {
        let (role, path) = (role.to_string(), path.to_path_buf());
        move |e| {
            let mut f = Failure::from(e);
            f.message = format!("{role} {}: {}", path.display(), f.message);
            f
        }
    }
}

type Outcome = Result<u8, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let report = match &cli.command {
        Command::VerifyWha { algebra, tol } => verify_wha(algebra, *tol)?,
        Command::Compile { fusion, fsymbols, out, tol } => compile_category(fusion, fsymbols, out, *tol)?,
        Command::Rfp { algebra, lengths, tol, m, dump } => rfp(algebra, lengths, *tol, m, dump.as_deref())?,
        Command::Anomaly { fusion, sequence, max_order, tol, integer_tol } => match (fusion, sequence) {
            (Some(f), _) => anomaly_fusion(f, *integer_tol)?,
            (None, Some(s)) => anomaly_sequence(s, *max_order, *tol, *integer_tol)?,
            (None, None) => return Err(Failure { code: 2, message: "anomaly needs --fusion or --sequence".into() }),
        },
        Command::EmitFib { out, kind } => return emit_fib(out.as_deref(), *kind),
    };
    emit(cli, &report)?;
    Ok(if report.overall { 0 } else { 1 })
}

fn emit(cli: &Cli, report: &VerificationReport) -> Result<(), Failure> {
    let json = report.to_json()?;
    if let Some(path) = &cli.report {
        std::fs::write(path, &json).map_err(|e| Failure::context("report", path)(e.into()))?;
    }
    if cli.json {
        print!("{json}");
    } else {
        print!("{}", report.to_table());
    }
    Ok(())
}

/// Reads and parses an input file, recording its digest.
fn load<T: DeserializeOwned>(report: &mut VerificationReport, role: &str, path: &Path) -> Result<T, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::context(role, path)(e.into()))?;
    report.inputs.push(InputDigest::new(role, &path.display().to_string(), &bytes));
    serde_json::from_slice(&bytes).map_err(|e| Failure::context(role, path)(e.into()))
}

fn load_algebra(report: &mut VerificationReport, path: &Path) -> Result<WhaTable, Failure> {
    let json: WhaJson = load(report, "algebra", path)?;
    json.to_table().map_err(Failure::context("algebra", path))
}

fn add_axiom_checks(report: &mut VerificationReport, alg: &WhaTable, tol: f64) {
    let axioms = verify_axioms(alg, tol);
    for r in &axioms.residuals {
        report.check(r.axiom.name(), r.axiom.statement(), r.residual, tol);
    }
    debug_assert_eq!(axioms.residuals.len(), Axiom::ALL.len());
    report.value("dim", alg.dim());
}

fn verify_wha(path: &Path, tol: f64) -> Result<VerificationReport, Failure> {
    let mut report = VerificationReport::new("verify-wha");
    let alg = load_algebra(&mut report, path)?;
    add_axiom_checks(&mut report, &alg, tol);
    Ok(report)
}

fn compile_category(fusion: &Path, fsymbols: &Path, out: &Path, tol: f64) -> Result<VerificationReport, Failure> {
    let mut report = VerificationReport::new("compile");
    let ring_json: FusionJson = load(&mut report, "fusion", fusion)?;
    let ring = ring_json.to_ring().map_err(Failure::context("fusion", fusion))?;
    if !ring.is_multiplicity_free() {
        return Err(Error::Unsupported("fusion rules with multiplicities above 1".into()).into());
    }
    let f_json: FSymbolsJson = load(&mut report, "fsymbols", fsymbols)?;
    let data = f_json.to_fsymbols(ring).map_err(Failure::context("fsymbols", fsymbols))?;
    let validation = validate_category(&data, tol);
    let anchors = [
        "F^{fcd}_e[g,l] F^{abl}_e[f,k] = sum_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]",
        "F^{abc}_d is unitary",
        "F-moves involving the unit are trivial",
        "d_a d_b = sum_c N_ab^c d_c",
        "Frobenius-Schur indicators match the F-data",
    ];
    for ((name, residual), anchor) in validation.residuals().into_iter().zip(anchors) {
        report.check(name, anchor, residual, tol);
    }
    if !report.overall {
        return Ok(report);
    }
    let alg = compile(&data, tol)?;
    add_axiom_checks(&mut report, &alg, tol);
    let mut json = WhaJson::from_table(&alg);
    json.verification = Some(serde_json::to_value(&report).map_err(Error::from)?);
    let text = to_json_string(&json)?;
    std::fs::write(out, text).map_err(|e| Failure::context("output", out)(e.into()))?;
    Ok(report)
}

fn select_m(m: &str, count: usize) -> Result<Vec<usize>, Failure> {
    if m == "all" {
        return Ok((0..count).collect());
    }
    match m.parse::<usize>() {
        Ok(k) if k < count => Ok(vec![k]),
        _ => Err(Failure { code: 2, message: format!("--m must be 'all' or an index below {count}, got '{m}'") }),
    }
}

#[derive(Serialize)]
struct Eigenvalue {
    m: usize,
    a: String,
    #[serde(rename = "L")]
    length: usize,
    re: f64,
    im: f64,
}

fn rfp(path: &Path, lengths: &[usize], tol: f64, m: &str, dump: Option<&Path>) -> Result<VerificationReport, Failure> {
    let mut report = VerificationReport::new("rfp");
    let alg = load_algebra(&mut report, path)?;
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(Failure { code: 2, message: "--L needs positive lengths".into() });
    }
    let mut lengths = lengths.to_vec();
    lengths.sort_unstable();
    lengths.dedup();
    if dump.is_some() && lengths[0] > DENSE_MAX_LENGTH {
        return Err(Failure { code: 2, message: format!("--dump needs a length of at most {DENSE_MAX_LENGTH}") });
    }
    // the hand-built Fibonacci representations carry the named labels
    let sym = if alg == build_fib_wha() {
        MpoSymmetry::fibonacci(tol)?
    } else {
        MpoSymmetry::from_algebra(alg, tol, DEFAULT_SEED)?
    };
    let lab = RfpLab::new(sym, tol)?;
    let labels: Vec<String> = lab.sym.ring.labels().to_vec();
    let ms = select_m(m, lab.idempotents.len())?;
    report.value("labels", &labels);
    report.value("lengths", &lengths);
    report.value("fixed_points", lab.idempotents.len());

    for a in &labels {
        for b in &labels {
            let f = check_fusion(&lab.sym, &lab.sym.ring, a, b, &lengths, tol)?;
            let worst = f.residuals.iter().copied().fold(0.0, f64::max);
            report.check(format!("fusion {a} x {b}"), "O_a O_b = sum_c N_ab^c O_c", worst, tol);
        }
        let d = check_dagger_dual(&lab.sym, a, &lengths, tol)?;
        let worst = d.residuals.iter().copied().fold(0.0, f64::max);
        report.check(format!("dagger {a}"), "O_a^dagger = O_abar", worst, tol);
    }

    let diag = &lab.transfer.diagnostics;
    report.check("transfer idempotency", "E^2 = E", diag.idempotency, tol);
    report.check("transfer spectrum", "spec E lies in {0, 1}", diag.spectrum_gap, tol);
    report.check("transfer off-unit blocks", "Psi_a(theta) = 0 for a != I", diag.other_blocks, tol);
    report.check_with(
        "transfer unit rank",
        "Psi_I(theta) has rank one",
        (diag.unit_rank as f64 - 1.0).abs(),
        0.0,
        diag.unit_rank == 1,
    );

    let mut eigenvalues = Vec::new();
    for &mi in &ms {
        for &l in &lengths {
            let integ = lab.check_integrity(mi, l, tol)?;
            let worst = [
                integ.trace_error,
                integ.hermiticity,
                integ.projector_idempotency,
                integ.projector_hermiticity,
                integ.omega_commutator,
                integ.min_eigenvalue.map_or(0.0, |e| (-e).max(0.0)),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            report.check_with(
                format!("integrity m={mi} L={l}"),
                "tr rho = 1, rho = rho^dagger >= 0, P^2 = P, [P, Omega] = 0",
                worst,
                tol,
                integ.pass,
            );
            for a in &labels {
                let s = lab.check_strong_symmetry(mi, a, l, tol)?;
                let gap = (s.lambda - s.expected).norm();
                report.check_with(
                    format!("strong symmetry m={mi} a={a} L={l}"),
                    "O_a rho_m = lambda_ma rho_m",
                    s.residual.max(gap),
                    tol,
                    s.pass,
                );
                eigenvalues.push(Eigenvalue { m: mi, a: a.clone(), length: l, re: s.lambda.re, im: s.lambda.im });
            }
            if (2..=DENSE_MAX_LENGTH + 1).contains(&l) {
                let t = lab.trace_out_site(mi, l, tol)?;
                let worst = t
                    .site_residuals
                    .iter()
                    .chain(&t.indistinguishability)
                    .copied()
                    .chain([(t.reduced_trace - 1.0).abs()])
                    .fold(0.0, f64::max);
                report.check_with(
                    format!("trace-out m={mi} L={l}"),
                    "tr_s rho_m = O^(L-1)(P_I E) Omega^{(x)(L-1)} / tr Psi_I(theta), independent of m",
                    worst,
                    tol,
                    t.pass,
                );
            }
            let p = lab.purification_check(mi, l, tol)?;
            let worst = p
                .state_residual
                .into_iter()
                .chain(p.pairs.iter().map(|q| q.distance))
                .chain(p.symmetry.iter().map(|(_, c)| c.residual))
                .fold(0.0, f64::max);
            report.check_with(
                format!("purification m={mi} L={l}"),
                "tr_anc |Psi_m><Psi_m| = rho_m, spec E_ab = sum_c N_ab^c spec Psi_c(theta)",
                worst,
                tol,
                p.pass,
            );
        }
    }
    report.value("eigenvalues", &eigenvalues);

    if let Some(out) = dump {
        let l = lengths[0];
        let mut data: Vec<C64> = Vec::new();
        let mut dim = 0;
        for &mi in &ms {
            let rho = lab.build_rfp(mi, l)?.dense()?;
            dim = rho.rows();
            data.extend(DenseTensor::from_matrix(&rho).data);
        }
        let t = DenseTensor::new(vec![ms.len(), dim, dim], data)?;
        let mut file = std::fs::File::create(out).map_err(|e| Failure::context("dump", out)(e.into()))?;
        write_ctf(&mut file, &t).map_err(Failure::context("dump", out))?;
        report.value("dump_length", l);
    }
    Ok(report)
}

fn anomaly_fusion(path: &Path, integer_tol: f64) -> Result<VerificationReport, Failure> {
    let mut report = VerificationReport::new("anomaly");
    let json: FusionJson = load(&mut report, "fusion", path)?;
    let ring = json.to_ring().map_err(Failure::context("fusion", path))?;
    let v = integrality_verdict(&ring, integer_tol)?;
    report.check(
        "dimension consistency",
        "d_a d_b = sum_c N_ab^c d_c with Frobenius-Perron dimensions",
        v.consistency_residual,
        1e-9,
    );
    report.value("anomalous", v.anomalous);
    report.result = Some(serde_json::to_value(&v).map_err(Error::from)?);
    Ok(report)
}

fn anomaly_sequence(
    path: &Path,
    max_order: Option<usize>,
    tol: f64,
    integer_tol: f64,
) -> Result<VerificationReport, Failure> {
    let mut report = VerificationReport::new("anomaly");
    let bytes = std::fs::read(path).map_err(|e| Failure::context("sequence", path)(e.into()))?;
    report.inputs.push(InputDigest::new("sequence", &path.display().to_string(), &bytes));
    let text = String::from_utf8(bytes)
        .map_err(|e| Failure { code: 2, message: format!("sequence {}: {e}", path.display()) })?;
    let values = parse_sequence(&text).map_err(Failure::context("sequence", path))?;
    let max_order = max_order.unwrap_or(values.len() / 2);
    let rec = analyze_sequence(&values, max_order, tol)?;
    report.check(
        "recurrence fit",
        "sum_t C_t F(L + s - t) = 0 for every sampled L",
        rec.fit_residual,
        tol,
    );
    report.value("order", rec.order);
    report.value("period", rec.period);
    if let Some(p) = rec.period {
        report.value("integral_at_period", integral_at_period(&values, p, integer_tol));
    }
    report.result = Some(serde_json::to_value(&rec).map_err(Error::from)?);
    Ok(report)
}

fn emit_fib(out: Option<&Path>, kind: FibKind) -> Outcome {
    let text = match kind {
        FibKind::Wha => to_json_string(&WhaJson::from_table(&build_fib_wha()))?,
        FibKind::Fusion => to_json_string(&FusionJson::from_ring(&FusionRing::fibonacci()))?,
        FibKind::Fsymbols => to_json_string(&FSymbolsJson::from_fsymbols(&FSymbols::fibonacci()))?,
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::context("output", path)(e.into()))?,
        None => print!("{text}"),
    }
    Ok(0)
}
