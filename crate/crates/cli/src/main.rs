use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use nilcommute::boxes::{
    box_bruteforce, box_two_part_lift, dhl_box, partition_count_identity, verify_box_counts, verify_dhl_boxes, BoxQ,
};
use nilcommute::jordanlab::loci::{five_two_passes, five_two_reports, five_two_spec};
use nilcommute::jordanlab::{
    locus_sample_check, locus_spec, mc_image, scaling_invariance_check, verify_mc_oblak, LocusStatus, DEFAULT_PRIME,
};
use nilcommute::poset::{build_poset, oblak, u_chain_table};
use nilcommute::table::{build_table, inverse_image, verify_completeness, Via};
use nilcommute::{Error, Partition};

const EXIT_USAGE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_DEVIATION: u8 = 4;

/// Partitions under P -> Q(P): tables, boxes and a matrix laboratory over GF(p).
///
/// Partitions are written "12,3", "(12,3)" or in block form "([10]^4,1)".
/// Every command is deterministic given its arguments and --seed (default 0).
#[derive(Parser, Debug)]
#[command(name = "nilcommute", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Prime field characteristic for matrix computations.
    #[arg(long, default_value_t = DEFAULT_PRIME, global = true)]
    prime: u64,

    /// Random samples per matrix experiment.
    #[arg(long, default_value_t = 8, global = true)]
    trials: usize,

    /// Seed for the sampler.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Size bound for verification suites (each suite has its own default).
    #[arg(long, global = true)]
    max_n: Option<usize>,

    /// Worker threads for the verification suites (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Q(P) by the Oblak recursion, with the U-chain table.
    Oblak { p: Partition },
    /// The table T(Q) of a stable two-part Q.
    Table { q: Partition },
    /// All P with Q(P) = Q.
    Inverse {
        q: Partition,
        /// Enumerate every partition of |Q| instead of using the closed form.
        #[arg(long)]
        brute: bool,
    },
    /// The box of Q, floor by floor.
    Box { q: Partition },
    /// The box of partitions with the same dhl as Q.
    Dhl { q: Partition },
    /// Run a verification suite; exit 0 iff it passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Conjectured generators of the locus of cell (k, l) of T(Q), checked by sampling.
    Loci { q: Partition, k: usize, l: usize },
    /// Jordan type of random matrices commuting with J_P, against Q(P).
    Mc { p: Partition },
    /// The poset D_P in DOT format.
    Poset { p: Partition },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    TableCompleteness,
    BoxCounts,
    DhlBoxes,
    PnIdentity,
    McOblak,
    Scaling,
    #[value(name = "loci-5-2", alias = "loci-(5,2)")]
    #[serde(rename = "loci-5-2")]
    Loci52,
}

struct Output {
    json: serde_json::Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(value: impl Serialize, text: String) -> Output {
        Output { json: serde_json::to_value(value).expect("serializable"), text, code: 0 }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    suite: Suite,
    max_n: Option<usize>,
    passed: bool,
    checked: usize,
    failures: Vec<String>,
    deviations: Vec<String>,
}

impl VerifyReport {
    fn text(&self) -> String {
        let mut out = format!(
            "{} {}: {} checked, {} failures, {} deviations\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite.to_possible_value().expect("no skipped variants").get_name(),
            self.checked,
            self.failures.len(),
            self.deviations.len()
        );
        for f in &self.failures {
            out.push_str(&format!("failure: {f}\n"));
        }
        for d in &self.deviations {
            out.push_str(&format!("deviation: {d}\n"));
        }
        out
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("valid json") + "\n",
                Format::Text => out.text,
            };
            let _ = io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => EXIT_USAGE,
                Error::Domain(_) => EXIT_DOMAIN,
            })
        }
    }
}

fn run(cli: &Cli) -> nilcommute::Result<Output> {
    match &cli.command {
        Command::Oblak { p } => Ok(cmd_oblak(p)),
        Command::Table { q } => cmd_table(q),
        Command::Inverse { q, brute } => cmd_inverse(q, *brute),
        Command::Box { q } => cmd_box(q),
        Command::Dhl { q } => {
            let b = dhl_box(q)?;
            Ok(box_output(&b, "dhl"))
        }
        Command::Verify { suite } => cmd_verify(cli, *suite),
        Command::Loci { q, k, l } => cmd_loci(cli, q, *k, *l),
        Command::Mc { p } => cmd_mc(cli, p),
        Command::Poset { p } => {
            let poset = build_poset(p)?;
            Ok(Output::ok(&poset, poset.to_dot()))
        }
    }
}

fn cmd_oblak(p: &Partition) -> Output {
    let image = oblak(p);
    let chains = u_chain_table(p);
    let mut text = format!("Q{p} = {image}\nr_P = {}\nstable: {}\n", p.r_p(), p.is_stable());
    for c in &chains {
        text.push_str(&format!("|C_{}| = {}\n", c.a, c.length));
    }
    let value = json!({
        "P": p,
        "Q": image,
        "r_p": p.r_p(),
        "stable": p.is_stable(),
        "chains": chains,
    });
    Output::ok(value, text)
}

fn cmd_table(q: &Partition) -> nilcommute::Result<Output> {
    let t = build_table(q)?;
    let mut text = t.render();
    for h in t.a_rows() {
        text.push_str(&format!("<row t={}> {}\n", h.t, cells_list(&h.cells)));
    }
    for h in t.hooks() {
        text.push_str(&format!("<hook t={}> {}\n", h.t, cells_list(&h.cells)));
    }
    Ok(Output::ok(&t, text))
}

fn cells_list(cells: &[(usize, usize)]) -> String {
    cells.iter().map(|(k, l)| format!("({k},{l})")).collect::<Vec<_>>().join(" ")
}

fn cmd_inverse(q: &Partition, brute: bool) -> nilcommute::Result<Output> {
    let via = if brute { Via::BruteForce } else { Via::ClosedForm };
    let set = inverse_image(q, via)?;
    let mut text = format!("{} partitions with Q(P) = {q}\n", set.len());
    for p in &set {
        text.push_str(&format!("{p}\n"));
    }
    let value = json!({
        "Q": q,
        "via": if brute { "brute-force" } else { "closed-form" },
        "partitions": set,
    });
    Ok(Output::ok(value, text))
}

fn box_output(b: &BoxQ, kind: &str) -> Output {
    let text = format!("{kind} box of {q}, dims {dims:?}\n{body}", q = b.q, dims = b.dims, body = b.render());
    let value = json!({
        "Q": b.q,
        "kind": b.kind,
        "dims": b.dims,
        "cells": b.nested(),
    });
    Output::ok(value, text)
}

fn cmd_box(q: &Partition) -> nilcommute::Result<Output> {
    if q.len() == 3 {
        if let Ok(b) = box_two_part_lift(q) {
            return Ok(box_output(&b, "lifted"));
        }
    }
    let rep = box_bruteforce(q)?;
    if let (true, Some(b)) = (rep.counts_match, &rep.arranged) {
        return Ok(box_output(b, "closed-form"));
    }
    let mut text = format!(
        "{} members of Q^-1({q}), key {} product {}\n",
        rep.total, rep.key, rep.expected_total
    );
    for (parts, count) in &rep.counts_by_parts {
        let want = rep.expected_by_parts.get(parts).copied().unwrap_or(0);
        text.push_str(&format!("{parts} parts: {count} (expected {want})\n"));
    }
    for m in &rep.members {
        text.push_str(&format!("{m}\n"));
    }
    let code = match (rep.counts_match, q.len()) {
        (true, _) => 0,
        (false, n) if n >= 4 => {
            eprintln!("conjecture deviation: counts for {q} do not fit the key");
            EXIT_DEVIATION
        }
        _ => {
            eprintln!("counts for {q} do not fit the key");
            EXIT_VERIFY
        }
    };
    let mut out = Output::ok(&rep, text);
    out.code = code;
    Ok(out)
}

fn cmd_verify(cli: &Cli, suite: Suite) -> nilcommute::Result<Output> {
    let mut rep = VerifyReport { suite, max_n: cli.max_n, passed: true, checked: 0, failures: vec![], deviations: vec![] };
    match suite {
        Suite::TableCompleteness => {
            let n = cli.max_n.unwrap_or(24);
            rep.max_n = Some(n);
            rep.checked = (1..=n).map(|m| nilcommute::table::two_part_targets(m).len()).sum();
            rep.failures = verify_completeness(n);
        }
        Suite::BoxCounts => {
            let n = cli.max_n.unwrap_or(16);
            rep.max_n = Some(n);
            let r = verify_box_counts(n);
            rep.checked = r.checked;
            rep.failures = r.failures;
            rep.deviations = r.deviations;
        }
        Suite::DhlBoxes => {
            let n = cli.max_n.unwrap_or(24);
            rep.max_n = Some(n);
            rep.checked = n;
            rep.failures = verify_dhl_boxes(n);
        }
        Suite::PnIdentity => {
            let n = cli.max_n.unwrap_or(40);
            rep.max_n = Some(n);
            for m in 1..=n {
                let (pn, sum) = partition_count_identity(m);
                rep.checked += 1;
                if pn != sum {
                    rep.failures.push(format!("n = {m}: p(n) = {pn}, sum of key products = {sum}"));
                }
            }
        }
        Suite::McOblak => {
            let n = cli.max_n.unwrap_or(10);
            rep.max_n = Some(n);
            let r = verify_mc_oblak(n, cli.prime, cli.trials, cli.seed)?;
            rep.checked = r.checked;
            rep.failures = r.failures;
            rep.deviations = r.deviations;
            rep.deviations.extend(r.flagged);
        }
        Suite::Scaling => {
            for base in ["5,2", "5,3", "7,4"] {
                let q: Partition = base.parse()?;
                let r = scaling_invariance_check(&q, cli.prime, cli.trials, cli.seed)?;
                rep.checked += r.pairs;
                rep.failures.extend(r.failures.iter().map(|f| format!("{q}: {f}")));
            }
        }
        Suite::Loci52 => {
            let reports = five_two_reports(cli.prime, cli.trials, cli.seed)?;
            rep.checked = reports.len();
            if !five_two_passes(&reports) {
                for r in &reports {
                    rep.failures.push(format!(
                        "{}: modal {} {}/{}, expected {}",
                        r.cell.map_or("a1=b1=0".to_string(), |(k, l)| format!("({k},{l})")),
                        r.modal_type.clone().unwrap_or_default(),
                        r.modal_count,
                        r.sample_count,
                        r.expected.clone().unwrap_or_default()
                    ));
                }
            }
        }
    }
    rep.passed = rep.failures.is_empty();
    let code = if !rep.passed {
        EXIT_VERIFY
    } else if !rep.deviations.is_empty() {
        EXIT_DEVIATION
    } else {
        0
    };
    let mut out = Output::ok(&rep, rep.text());
    out.code = code;
    Ok(out)
}

fn cmd_loci(cli: &Cli, q: &Partition, k: usize, l: usize) -> nilcommute::Result<Output> {
    let spec = if q.parts() == [5, 2] { five_two_spec(k, l)? } else { locus_spec(q, k, l)? };
    let rep = locus_sample_check(&spec, cli.prime, cli.trials, cli.seed)?;
    let mut text = format!("cell ({k},{l}) of T{q}, status {:?}\n", rep.status);
    text.push_str(&format!("generators: {}\n", rep.generators.join(", ")));
    if !rep.conditions.is_empty() {
        text.push_str(&format!("nonzero: {}\n", rep.conditions.join(", ")));
    }
    for (ty, c) in &rep.type_histogram {
        text.push_str(&format!("{c:>5}  {ty}\n"));
    }
    if rep.failed_samples > 0 {
        text.push_str(&format!("{} samples could not be drawn\n", rep.failed_samples));
    }
    text.push_str(&format!(
        "modal {} vs table {}: {}\n",
        rep.modal_type.clone().unwrap_or_default(),
        rep.expected.clone().unwrap_or_default(),
        if rep.matches_table { "match" } else { "mismatch" }
    ));
    let code = match (rep.matches_table, rep.status) {
        (true, _) => 0,
        (false, LocusStatus::Proven) => EXIT_VERIFY,
        (false, _) => {
            eprintln!("conjecture deviation at cell ({k},{l}) of T{q}");
            EXIT_DEVIATION
        }
    };
    let mut out = Output::ok(json!({ "spec": spec, "report": rep }), text);
    out.code = code;
    Ok(out)
}

fn cmd_mc(cli: &Cli, p: &Partition) -> nilcommute::Result<Output> {
    let mc = mc_image(p, cli.prime, cli.trials, cli.seed)?;
    let ob = oblak(p);
    let mut text = format!("matrix image {} over {} samples\noblak {ob}\n", mc.image, mc.samples.len());
    for (a, b) in &mc.incomparable {
        text.push_str(&format!("incomparable samples: {a} {b}\n"));
    }
    let agree = mc.image == ob;
    let code = match (agree && !mc.flagged(), p.r_p() <= 3) {
        (true, _) => 0,
        (false, true) => EXIT_VERIFY,
        (false, false) => EXIT_DEVIATION,
    };
    let mut out = Output::ok(json!({ "mc": mc, "oblak": ob, "agree": agree }), text);
    out.code = code;
    Ok(out)
}
