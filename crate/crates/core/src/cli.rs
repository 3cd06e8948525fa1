//! The `jpst` command line: argument definitions and command execution.
//!
//! Every command produces a [`CommandOutput`]: a JSON document (default) or a
//! CSV table, plus the process exit code (0 computed, 2 precondition or
//! obstruction error, 3 capacity error, 4 numeric oracle failure).

use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exactmath::{rat_to_f64, ExactRat};
use crate::oracle::{self, WalkReport, DEFAULT_ORACLE_CAP};
use crate::par::Execution;
use crate::scheme::{eigen_table, WeightVector};
use crate::transfer::{self, DiagonalShift};
use crate::unweighted::{self, UnionSelector, DEFAULT_FREE_BITS_CAP, DEFAULT_PI2_CAP, DEFAULT_SEARCH_CAP};
use crate::wire::{self, csv_rational, int_json, rat_json};

pub const FIGURE1_KS: [usize; 7] = [12, 16, 20, 24, 28, 32, 36];

#[derive(Debug, Parser)]
#[command(name = "jpst", version, about = "Perfect state transfer on graphs of the Johnson scheme J(2k,k)")]
pub struct Cli {
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Override the size cap of the command (vertices, k, or free bits).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Worker threads for searches (1 = sequential).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Omit the timestamp field from JSON output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalue table p_r(s) of J(2k,k).
    Eigentable {
        #[arg(long)]
        k: usize,
    },
    /// Weights with PST at a given time from coefficients c_1..c_m.
    Construct {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// c_1..c_m, e.g. "1,1".
        #[arg(long)]
        c: String,
        #[arg(long, default_value = "pi")]
        tau: String,
        /// Shift w_0 so the spectrum is integral.
        #[arg(long)]
        integral_spectrum: bool,
    },
    /// PST verdict for weights or a selector; earliest time when --tau is omitted.
    Check {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        tau: Option<String>,
    },
    /// Unions with PST at pi/2.
    Pi2 {
        #[arg(long)]
        k: usize,
        /// List the whole family.
        #[arg(long, conflicts_with_all = ["from_t", "sample"])]
        enumerate: bool,
        /// Build the union from a subset T of 1..k, e.g. "1,2,4".
        #[arg(long = "from-T", alias = "from-t")]
        from_t: Option<String>,
        /// Draw this many random members instead of enumerating.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Unions with PST at exactly pi/2^h.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: u32,
        /// Check this many random selectors instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the union of classes {7,11,...,30} on J(62,31) at pi/4.
    #[command(name = "verify-j62")]
    VerifyJ62,
    /// Weights c_j = 3 (j a power of two), 2 otherwise, for several k.
    Figure1 {
        #[arg(long = "k-list", alias = "ks")]
        k_list: Option<String>,
    },
    /// Numeric |U(tau)| between {1..k} and its complement.
    Oracle {
        #[arg(long)]
        k: usize,
        /// Defaults to 2k.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        tau: String,
        /// Fidelity curve over "start:stop:steps" in units of pi.
        #[arg(long)]
        grid: Option<String>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GraphArgs {
    /// Exact weights w_0..w_m, e.g. "0,2/3,1/6" or a JSON list of {"num","den"}.
    #[arg(long)]
    pub weights: Option<String>,
    /// Selected classes, e.g. "[1,2]".
    #[arg(long)]
    pub selector: Option<String>,
}

enum Graph {
    Weighted(WeightVector),
    Union(UnionSelector),
}

impl GraphArgs {
    fn resolve(&self, k: usize) -> Result<Graph> {
        match (&self.weights, &self.selector) {
            (Some(w), None) => Ok(Graph::Weighted(WeightVector::new(k, wire::parse_rational_list(w)?)?)),
            (None, Some(s)) => Ok(Graph::Union(UnionSelector::from_classes(k, &wire::parse_usize_list(s)?)?)),
            _ => Err(Error::invalid("give exactly one of --weights or --selector")),
        }
    }

    fn echo(&self) -> Value {
        json!({ "weights": self.weights, "selector": self.selector })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub exit_code: i32,
}

struct Outcome {
    inputs: Value,
    outputs: Value,
    caps: Value,
    csv: String,
}

/// Parse `args` (including the program name) and run the command.
pub fn run_from<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => CommandOutput {
            text: e.to_string(),
            exit_code: if e.use_stderr() { 2 } else { 0 },
        },
    }
}

pub fn run(cli: &Cli) -> CommandOutput {
    let name = command_name(&cli.command);
    match execute(cli) {
        Ok(out) => {
            if cli.csv {
                return CommandOutput { text: out.csv, exit_code: 0 };
            }
            let mut doc = Map::new();
            doc.insert("command".into(), json!(name));
            doc.insert("inputs".into(), out.inputs);
            doc.insert("outputs".into(), out.outputs);
            doc.insert(
                "provenance".into(),
                json!({
                    "library": env!("CARGO_PKG_NAME"),
                    "version": env!("CARGO_PKG_VERSION"),
                    "parallel": cfg!(feature = "parallel"),
                    "caps": out.caps,
                }),
            );
            if !cli.no_timestamp {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                doc.insert("timestamp".into(), json!(secs));
            }
            CommandOutput { text: pretty(&Value::Object(doc)), exit_code: 0 }
        }
        Err(e) => {
            let doc = json!({
                "command": name,
                "error": { "kind": error_kind(&e), "message": e.to_string() },
            });
            CommandOutput { text: pretty(&doc), exit_code: e.exit_code() }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialization");
    s.push('\n');
    s
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidArgument(_) | Error::NotPrime(_) => "precondition",
        Error::Obstruction { .. } => "obstruction",
        Error::ParityPattern { .. } => "parity_pattern",
        Error::MissingPowerOfTwo(_) => "missing_power_of_two",
        Error::Capacity { .. } => "capacity",
        Error::Numeric(_) => "numeric",
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eigentable { .. } => "eigentable",
        Command::Construct { .. } => "construct",
        Command::Check { .. } => "check",
        Command::Pi2 { .. } => "pi2",
        Command::Search { .. } => "search",
        Command::VerifyJ62 => "verify-j62",
        Command::Figure1 { .. } => "figure1",
        Command::Oracle { .. } => "oracle",
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let exec = Execution::from_threads(cli.threads);
    match &cli.command {
        Command::Eigentable { k } => cmd_eigentable(*k),
        Command::Construct { k, m, c, tau, integral_spectrum } => {
            cmd_construct(*k, *m, c, tau, *integral_spectrum)
        }
        Command::Check { k, graph, tau } => cmd_check(*k, graph, tau.as_deref()),
        Command::Pi2 { k, enumerate, from_t, sample, seed } => {
            cmd_pi2(*k, *enumerate, from_t.as_deref(), *sample, *seed, cli.cap)
        }
        Command::Search { k, h, sample, seed } => cmd_search(*k, *h, *sample, *seed, cli.cap, exec),
        Command::VerifyJ62 => cmd_verify_j62(),
        Command::Figure1 { k_list } => cmd_figure1(k_list.as_deref()),
        Command::Oracle { k, n, graph, tau, grid } => {
            cmd_oracle(n.unwrap_or(2 * k), *k, graph, tau, grid.as_deref(), cli.cap)
        }
    }
}

fn csv_line(cells: &[String]) -> String {
    let mut s = cells.join(",");
    s.push('\n');
    s
}

fn cmd_eigentable(k: usize) -> Result<Outcome> {
    if k == 0 || k > 200 {
        return Err(Error::invalid(format!("need 1 <= k <= 200, got {k}")));
    }
    let table = eigen_table(k);
    let rows: Vec<Value> = table.rows().iter().map(|row| json!(row.iter().map(int_json).collect::<Vec<_>>())).collect();
    let mut csv = String::from("r");
    for s in 0..=k {
        csv.push_str(&format!(",s={s}"));
    }
    csv.push('\n');
    for (r, row) in table.rows().iter().enumerate() {
        let mut cells = vec![r.to_string()];
        cells.extend(row.iter().map(|v| v.to_string()));
        csv.push_str(&csv_line(&cells));
    }
    Ok(Outcome {
        inputs: json!({ "k": k }),
        outputs: json!({ "n": 2 * k, "k": k, "entry": "p_r(s), rows r = 0..k, columns s = 0..k", "table": rows }),
        caps: json!({ "k_max": 200 }),
        csv,
    })
}

fn weights_csv(w: &WeightVector) -> String {
    let mut csv = String::from("r,w_r,w_r_exact,inexact\n");
    for (r, q) in w.entries().iter().enumerate() {
        let (d, e, inexact) = csv_rational(q);
        csv.push_str(&csv_line(&[r.to_string(), d, e, inexact.to_string()]));
    }
    csv
}

fn cmd_construct(k: usize, m: usize, c: &str, tau: &str, integral: bool) -> Result<Outcome> {
    let coeffs = wire::parse_int_list(c)?;
    let tau_q = wire::parse_time(tau)?;
    let shift = if integral { DiagonalShift::ZeroConstantTerm } else { DiagonalShift::Zero };
    let w = transfer::construct_weights(k, m, &coeffs, &tau_q, shift)?;
    let cert = transfer::pst_check(k, &w, &tau_q)?;
    Ok(Outcome {
        inputs: json!({ "k": k, "m": m, "c": coeffs.iter().map(int_json).collect::<Vec<_>>(), "tau": wire::time_json(&tau_q), "integral_spectrum": integral }),
        outputs: json!({
            "weights": w.entries().iter().map(rat_json).collect::<Vec<_>>(),
            "certificate": wire::certificate_json(&cert),
        }),
        caps: json!({}),
        csv: weights_csv(&w),
    })
}

fn evidence_csv(k: usize, evidence: &[ExactRat]) -> String {
    let mut csv = String::from("x,s,evidence,evidence_exact,odd_integer\n");
    for (x, e) in evidence.iter().enumerate() {
        let (d, exact, _) = csv_rational(e);
        csv.push_str(&csv_line(&[
            x.to_string(),
            (k - x).to_string(),
            d,
            exact,
            crate::exactmath::is_odd_integer(e).to_string(),
        ]));
    }
    csv
}

fn cmd_check(k: usize, graph: &GraphArgs, tau: Option<&str>) -> Result<Outcome> {
    let g = graph.resolve(k)?;
    let tau_q = tau.map(wire::parse_time).transpose()?;
    let inputs = json!({ "k": k, "graph": graph.echo(), "tau": tau_q.as_ref().map(wire::time_json) });
    let (outputs, csv) = match (&g, &tau_q) {
        (Graph::Weighted(w), Some(t)) => {
            let cert = transfer::pst_check(k, w, t)?;
            (json!({ "certificate": wire::certificate_json(&cert) }), evidence_csv(k, &cert.parity_evidence))
        }
        (Graph::Union(u), Some(t)) => {
            let cert = transfer::pst_check(k, &u.to_weights(), t)?;
            (json!({ "certificate": wire::certificate_json(&cert) }), evidence_csv(k, &cert.parity_evidence))
        }
        (Graph::Weighted(w), None) => {
            let earliest = transfer::minimal_pst_time(k, w)?;
            let cert = match &earliest {
                Some(t) => Some(transfer::pst_check(k, w, t)?),
                None => None,
            };
            let csv = match &cert {
                Some(c) => evidence_csv(k, &c.parity_evidence),
                None => String::from("x,s,evidence,evidence_exact,odd_integer\n"),
            };
            (
                json!({
                    "pst": earliest.is_some(),
                    "minimal_time": earliest.as_ref().map(wire::time_json),
                    "certificate": cert.as_ref().map(wire::certificate_json),
                }),
                csv,
            )
        }
        (Graph::Union(u), None) => {
            let v = unweighted::check_union(k, u)?;
            let csv = evidence_csv(k, &v.certificate.parity_evidence);
            (
                json!({
                    "pst": v.has_pst(),
                    "minimal_time": v.certificate.time_over_pi.as_ref().map(wire::time_json),
                    "union": wire::union_verdict_json(&v),
                }),
                csv,
            )
        }
    };
    Ok(Outcome { inputs, outputs, caps: json!({}), csv })
}

fn selectors_csv(sels: &[(UnionSelector, ExactRat)]) -> String {
    let mut csv = String::from("selector,tau_over_pi\n");
    for (u, t) in sels {
        let classes: Vec<String> = u.classes().iter().map(|r| r.to_string()).collect();
        csv.push_str(&csv_line(&[classes.join(" "), t.to_string()]));
    }
    csv
}

fn cmd_pi2(k: usize, enumerate: bool, from_t: Option<&str>, sample: Option<usize>, seed: u64, cap: Option<usize>) -> Result<Outcome> {
    let cap = cap.unwrap_or(DEFAULT_PI2_CAP);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut rows = Vec::new();
    let mut listed = Vec::new();
    let push = |u: UnionSelector, t: Option<Vec<usize>>, rows: &mut Vec<Value>, listed: &mut Vec<(UnionSelector, ExactRat)>| -> Result<()> {
        let v = unweighted::check_union(k, &u)?;
        rows.push(json!({
            "T": t,
            "selector": wire::selector_json(&u),
            "pst_at_half_pi": transfer::pst_check(k, &u.to_weights(), &half)?.verdict,
            "minimal_time": v.certificate.time_over_pi.as_ref().map(wire::time_json),
        }));
        listed.push((u, v.certificate.time_over_pi.clone().unwrap_or_else(BigRational::zero)));
        Ok(())
    };
    let mode;
    if let Some(t) = from_t {
        mode = "from-T";
        let t = wire::parse_usize_list(t)?;
        let u = unweighted::pi2_family(k, &t)?;
        push(u, Some(t), &mut rows, &mut listed)?;
    } else if let Some(n) = sample {
        mode = "sample";
        for (t, u) in unweighted::sample_pi2(k, n, seed)? {
            push(u, Some(t), &mut rows, &mut listed)?;
        }
    } else {
        let _ = enumerate;
        mode = "enumerate";
        for u in unweighted::enumerate_pi2(k, cap)? {
            push(u, None, &mut rows, &mut listed)?;
        }
    }
    let expected = if k >= 1 { Some(1u128 << (k - crate::exactmath::floor_log2(k) as usize - 1)) } else { None };
    Ok(Outcome {
        inputs: json!({ "k": k, "mode": mode, "T": from_t, "sample": sample, "seed": seed }),
        outputs: json!({
            "count": rows.len(),
            "family_size": expected.map(|c| c.to_string()),
            "selectors": rows,
        }),
        caps: json!({ "k_max": cap }),
        csv: selectors_csv(&listed),
    })
}

fn cmd_search(k: usize, h: u32, sample: Option<usize>, seed: u64, cap: Option<usize>, exec: Execution) -> Result<Outcome> {
    let search_cap = cap.unwrap_or(DEFAULT_SEARCH_CAP);
    let free_cap = cap.unwrap_or(DEFAULT_FREE_BITS_CAP);
    let congruence = unweighted::solve_thm41(k, h, free_cap, exec)?;
    let mut congruence_rows = Vec::new();
    let mut listed = Vec::new();
    for u in &congruence {
        let v = unweighted::check_union(k, u)?;
        let t = v.certificate.time_over_pi.clone().unwrap_or_else(BigRational::zero);
        congruence_rows.push(json!({
            "selector": wire::selector_json(u),
            "h": v.h,
            "z": v.z.as_ref().map(int_json),
            "time": v.certificate.time_over_pi.as_ref().map(wire::time_json),
        }));
        listed.push((*u, t));
    }

    // Independent route: direct eigenvalue-gap classification.
    let brute = match sample {
        Some(n) => Some(("sampled", unweighted::search_sampled(k, n, seed, Some(h as u64), exec)?)),
        None if k <= search_cap => Some(("exhaustive", unweighted::search_all(k, Some(h as u64), search_cap, exec)?)),
        None => None,
    };
    let cross_check = brute.map(|(mode, hits)| {
        let exact_h: Vec<_> = hits.into_iter().filter(|x| x.h == h as u64).collect();
        let agree = match mode {
            "exhaustive" => exact_h.iter().map(|x| x.selector).eq(congruence.iter().copied()),
            _ => exact_h.iter().all(|x| congruence.contains(&x.selector)),
        };
        json!({ "mode": mode, "count": exact_h.len(), "agrees": agree })
    });
    Ok(Outcome {
        inputs: json!({ "k": k, "h": h, "sample": sample, "seed": seed }),
        outputs: json!({
            "time": wire::time_json(&BigRational::new(BigInt::one(), BigInt::one() << h)),
            "count": congruence.len(),
            "solutions": congruence_rows,
            "cross_check": cross_check,
        }),
        caps: json!({ "exhaustive_k_max": search_cap, "free_bits_max": free_cap }),
        csv: selectors_csv(&listed),
    })
}

fn cmd_verify_j62() -> Result<Outcome> {
    let v = unweighted::verify_j62()?;
    let pass = v.has_pst() && v.h == Some(2) && v.z.as_ref().is_some_and(|z| z.is_one());
    let time = v.certificate.time_over_pi.clone();
    let mut csv = String::from("k,selector,h,z,tau,result\n");
    csv.push_str(&csv_line(&[
        "31".into(),
        unweighted::J62_CLASSES.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" "),
        v.h.map(|h| h.to_string()).unwrap_or_default(),
        v.z.as_ref().map(|z| z.to_string()).unwrap_or_default(),
        time.as_ref().map(wire::time_text).unwrap_or_default(),
        if pass { "PASS" } else { "FAIL" }.into(),
    ]));
    Ok(Outcome {
        inputs: json!({ "k": 31, "selector": unweighted::J62_CLASSES }),
        outputs: json!({
            "result": if pass { "PASS" } else { "FAIL" },
            "expected_time": "pi/4",
            "union": wire::union_verdict_json(&v),
        }),
        caps: json!({}),
        csv,
    })
}

fn cmd_figure1(k_list: Option<&str>) -> Result<Outcome> {
    let ks = match k_list {
        Some(s) => wire::parse_usize_list(s)?,
        None => FIGURE1_KS.to_vec(),
    };
    let mut csv = String::from("k,r,w_r,log10_w_r,w_r_exact,inexact\n");
    let mut series = Vec::new();
    for &k in &ks {
        let w = transfer::canonical_example(k)?;
        let cert = transfer::pst_check(k, &w, &BigRational::one())?;
        let ws = &w.entries()[1..];
        let positive = ws.iter().all(Signed::is_positive);
        let decreasing = ws.windows(2).all(|p| p[0] > p[1]);
        for (i, q) in ws.iter().enumerate() {
            let (d, e, inexact) = csv_rational(q);
            csv.push_str(&csv_line(&[
                k.to_string(),
                (i + 1).to_string(),
                d,
                wire::decimal(rat_to_f64(q).log10()),
                e,
                inexact.to_string(),
            ]));
        }
        series.push(json!({
            "k": k,
            "weights": ws.iter().map(rat_json).collect::<Vec<_>>(),
            "log10_weights": ws.iter().map(|q| rat_to_f64(q).log10()).collect::<Vec<_>>(),
            "all_positive": positive,
            "strictly_decreasing": decreasing,
            "pst_at_pi": cert.verdict,
        }));
    }
    Ok(Outcome {
        inputs: json!({ "k_list": ks }),
        outputs: json!({ "coefficients": "c_j = 3 if j is a power of two, else 2; m = k; tau = pi", "series": series }),
        caps: json!({}),
        csv,
    })
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::invalid(format!("grid must be start:stop:steps, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    if steps < 2 {
        return Err(bad());
    }
    Ok((0..steps).map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64).collect())
}

fn report_json(r: &WalkReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn cmd_oracle(n: usize, k: usize, graph: &GraphArgs, tau: &str, grid: Option<&str>, cap: Option<usize>) -> Result<Outcome> {
    let cap = cap.unwrap_or(DEFAULT_ORACLE_CAP);
    let weights: Vec<f64> = match graph.resolve(k)? {
        Graph::Weighted(w) => w.entries().iter().map(rat_to_f64).collect(),
        Graph::Union(u) => oracle::selector_weights(k, &u.classes()),
    };
    let tau_q = wire::parse_time(tau)?;
    let sys = oracle::WalkSystem::new(n, k, &weights, cap)?;
    let report = sys.report(rat_to_f64(&tau_q));
    if !report.valid {
        return Err(Error::Numeric(format!("unitarity defect {:e} too large", report.unitarity_defect)));
    }
    let curve = match grid {
        Some(g) => Some(
            parse_grid(g)?
                .into_iter()
                .map(|t| (t, sys.fidelity(t * std::f64::consts::PI)))
                .collect::<Vec<_>>(),
        ),
        None => None,
    };
    let csv = match &curve {
        Some(c) => {
            let mut s = String::from("t_over_pi,fidelity\n");
            for (t, f) in c {
                s.push_str(&csv_line(&[wire::decimal(*t), wire::decimal(*f)]));
            }
            s
        }
        None => {
            let mut s = String::from("t_over_pi,fidelity,unitarity_defect,eigen_residual,pst\n");
            s.push_str(&csv_line(&[
                wire::decimal(report.tau_over_pi),
                wire::decimal(report.fidelity),
                wire::decimal(report.unitarity_defect),
                wire::decimal(report.eigen_residual),
                report.pst.to_string(),
            ]));
            s
        }
    };
    Ok(Outcome {
        inputs: json!({ "n": n, "k": k, "graph": graph.echo(), "tau": wire::time_json(&tau_q), "grid": grid }),
        outputs: json!({
            "report": report_json(&report),
            "tolerance": oracle::PST_TOLERANCE,
            "curve": curve.map(|c| c.into_iter().map(|(t, f)| json!({ "t_over_pi": t, "fidelity": f })).collect::<Vec<_>>()),
        }),
        caps: json!({ "vertex_max": cap }),
        csv,
    })
}
