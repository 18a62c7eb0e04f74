//! Command-line front end: exact special values, identity verification with
//! residual reports, relation search, and gamma-monomial classification.
//! Output is deterministic for a fixed configuration; exit codes are 0 for
//! success/pass, 1 for a verification failure, 2 for usage errors.

mod grammar;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use carlitz_core::*;

type CliResult<T> = std::result::Result<T, String>;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "carlitz",
    version,
    about = "Exact arithmetic for F_q[θ] special values: zeta, gamma, periods, \
             difference equations, relation search"
)]
struct Cli {
    /// Field size q = p^e (prime power). Mutually exclusive with --p/--e.
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Characteristic (with --e); alternative to --q.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Extension degree e with q = p^e.
    #[arg(long, global = true)]
    e: Option<u32>,
    /// Level of the carried field K_ell = F_{q^ell}((u)).
    #[arg(long, global = true, default_value_t = 1)]
    ell: u32,
    /// Absolute u-adic working precision.
    #[arg(long, global = true, default_value_t = 200)]
    prec: i64,
    /// t-truncation degree for difference-equation data.
    #[arg(long, global = true, default_value_t = 8)]
    tdeg: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Carlitz zeta value zeta_C(s) as a Laurent series.
    Zeta {
        #[arg(long)]
        s: u32,
    },
    /// Goss factorial (num/den)! as a one-unit Laurent series.
    Gamma {
        #[arg(long, allow_negative_numbers = true)]
        num: i64,
        #[arg(long, allow_negative_numbers = true)]
        den: i64,
    },
    /// Fundamental period of the level-ell Carlitz module.
    Pi,
    /// Twisted Omega value Omega_ell^(-j)(theta).
    Omega {
        #[arg(long, default_value_t = 0)]
        j: u32,
    },
    /// Bernoulli-Carlitz number B_n, exact in k.
    Bernoulli {
        #[arg(long)]
        n: u64,
    },
    /// Polylogarithm value of weight n at alpha.
    Polylog {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        alpha: String,
    },
    /// Identity verification with residual reports; exit 1 on failure.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Exact relation search and certificate recovery.
    Relation {
        #[command(subcommand)]
        what: RelationCmd,
    },
    /// Algebraicity classification of a gamma monomial.
    Classify {
        /// e.g. "(-1/8)!^2 * pi^1"
        #[arg(long)]
        monomial: String,
    },
    /// Expected transcendence degree and the index set U(s).
    Trdeg {
        #[arg(long)]
        s: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Gamma-quotient identities for Omega and its twists at the configured level.
    ChowlaSelberg,
    /// zeta(n) * Gamma_(n+1) = B_n * pi~^n (requires (q-1) | n to hold).
    EulerCarlitz {
        #[arg(long)]
        n: u32,
    },
    /// zeta(p^m n) = zeta(n)^(p^m).
    Frobenius {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Functional equation of a difference-equation block.
    Motive {
        /// e.g. "carlitz:2" or "tensor:2+polylog:1:1,θ"
        #[arg(long)]
        block: String,
        /// Include the full block serialization in JSON output.
        #[arg(long, default_value_t = false)]
        dump_block: bool,
    },
}

#[derive(Subcommand)]
enum RelationCmd {
    /// Bounded-degree k-linear relation among series from a JSON-lines file.
    Find {
        #[arg(long)]
        values: String,
        #[arg(long, default_value_t = 0)]
        deg_bound: u32,
    },
    /// Certificate for zeta(n) as a k-combination of polylogarithm values.
    AndersonThakur {
        #[arg(long)]
        n: u32,
    },
}

struct Config {
    p: u64,
    e: u32,
    ell: u32,
    prec: i64,
    tdeg: usize,
    format: Format,
}

impl Config {
    fn resolve(cli: &Cli) -> CliResult<Config> {
        let (p, e) = match (cli.q, cli.p, cli.e) {
            (Some(q), None, None) => split_prime_power(q).map_err(|e| e.to_string())?,
            (None, Some(p), e) => (p, e.unwrap_or(1)),
            (None, None, None) => (3, 1),
            _ => return Err("give either --q or --p [--e], not both".into()),
        };
        if cli.prec <= 0 {
            return Err("--prec must be positive".into());
        }
        Ok(Config {
            p,
            e,
            ell: cli.ell,
            prec: cli.prec,
            tdeg: cli.tdeg,
            format: cli.format,
        })
    }

    fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    fn field(&self) -> CliResult<Field> {
        make_field(self.p, self.e, self.ell).map_err(|e| e.to_string())
    }

    fn base_field(&self) -> CliResult<Field> {
        make_field(self.p, self.e, 1).map_err(|e| e.to_string())
    }

    fn echo(&self) -> Value {
        json!({
            "p": self.p,
            "e": self.e,
            "q": self.q(),
            "ell": self.ell,
            "prec": self.prec,
            "tdeg": self.tdeg,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match Config::resolve(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(&cli.cmd, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(cfg: &Config, command: &str, payload: Value, text: String) {
    match cfg.format {
        Format::Text => println!("{text}"),
        Format::Json => {
            let mut obj = json!({
                "command": command,
                "config": cfg.echo(),
            });
            if let (Value::Object(dst), Value::Object(src)) = (&mut obj, payload) {
                for (k, v) in src {
                    dst.insert(k, v);
                }
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&obj).expect("valid JSON")
            );
        }
    }
}

fn emit_value(cfg: &Config, command: &str, v: &Laurent) {
    emit(
        cfg,
        command,
        json!({"value": laurent_to_json(v)}),
        v.to_string(),
    );
}

fn checks_output(cfg: &Config, command: &str, checks: &[CheckOutcome]) -> u8 {
    let pass = checks.iter().all(|c| c.pass);
    let payload = json!({
        "pass": pass,
        "checks": checks
            .iter()
            .map(|c| serde_json::to_value(c).expect("serializable"))
            .collect::<Vec<_>>(),
    });
    let mut text = String::new();
    for c in checks {
        text.push_str(&format!(
            "{}: {}{}\n",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            match c.residual_val {
                Some(v) => format!(" (residual at u^{v})"),
                None => format!(" (zero residual through u^{})", c.checked_prec),
            }
        ));
    }
    text.push_str(if pass { "all checks passed" } else { "FAILED" });
    emit(cfg, command, payload, text);
    u8::from(!pass)
}

fn run(cmd: &Cmd, cfg: &Config) -> CliResult<u8> {
    let es = |e: Error| e.to_string();
    match cmd {
        Cmd::Zeta { s } => {
            if *s == 0 {
                return Err("--s must be positive".into());
            }
            let field = cfg.field()?;
            emit_value(cfg, "zeta", &zeta(*s, &field, cfg.prec));
            Ok(0)
        }
        Cmd::Gamma { num, den } => {
            let field = cfg.field()?;
            let arg = GammaArg::new(*num, *den).map_err(es)?;
            let v = goss_factorial(&arg, &field, cfg.prec).map_err(es)?;
            emit_value(cfg, "gamma", &v);
            Ok(0)
        }
        Cmd::Pi => {
            let field = cfg.field()?;
            emit_value(cfg, "pi", &pi_tilde(&field, cfg.prec));
            Ok(0)
        }
        Cmd::Omega { j } => {
            let field = cfg.field()?;
            let v = omega_value(&field, *j, cfg.prec).map_err(es)?;
            emit_value(cfg, "omega", &v);
            Ok(0)
        }
        Cmd::Bernoulli { n } => {
            let field = cfg.base_field()?;
            let b = bernoulli_carlitz(&field, *n);
            emit(
                cfg,
                "bernoulli",
                json!({"value": b.to_string()}),
                b.to_string(),
            );
            Ok(0)
        }
        Cmd::Polylog { n, alpha } => {
            let fq = cfg.base_field()?;
            let field = cfg.field()?;
            let a = parse_ratfunc(&fq, alpha).map_err(es)?;
            let v = polylog_value(*n, &a, &field, cfg.prec).map_err(es)?;
            emit_value(cfg, "polylog", &v);
            Ok(0)
        }
        Cmd::Verify { what } => run_verify(what, cfg),
        Cmd::Relation { what } => run_relation(what, cfg),
        Cmd::Classify { monomial } => {
            let fq = cfg.base_field()?;
            let m = grammar::parse_monomial(monomial)?;
            let (verdict, cert) = classify_gamma_monomial(&fq, &m).map_err(es)?;
            let verdict_str = match verdict {
                Verdict::Algebraic => "algebraic",
                Verdict::Transcendental => "transcendental",
            };
            emit(
                cfg,
                "classify",
                json!({
                    "monomial": m.to_string(),
                    "verdict": verdict_str,
                    "certificate": cert.to_json(),
                }),
                format!(
                    "{verdict_str} (common_ell={}, exponent_vector={:?})",
                    cert.common_ell, cert.exponent_vector
                ),
            );
            Ok(0)
        }
        Cmd::Trdeg { s } => {
            let profile = IndependenceProfile::new(cfg.q(), *s, cfg.ell).map_err(es)?;
            let text = profile.expected_trdeg.to_string();
            let payload = serde_json::to_value(&profile).expect("serializable");
            emit(cfg, "trdeg", json!({ "profile": payload }), text);
            Ok(0)
        }
    }
}

fn run_verify(what: &VerifyCmd, cfg: &Config) -> CliResult<u8> {
    let es = |e: Error| e.to_string();
    match what {
        VerifyCmd::ChowlaSelberg => {
            let field = cfg.field()?;
            let checks = verify_chowla_selberg(&field, cfg.prec).map_err(es)?;
            Ok(checks_output(cfg, "verify chowla-selberg", &checks))
        }
        VerifyCmd::EulerCarlitz { n } => {
            let field = cfg.field()?;
            let check = verify_euler_carlitz(&field, *n, cfg.prec).map_err(es)?;
            Ok(checks_output(cfg, "verify euler-carlitz", &[check]))
        }
        VerifyCmd::Frobenius { n, m } => {
            let field = cfg.field()?;
            let check = verify_frobenius_power(&field, *n, *m, cfg.prec).map_err(es)?;
            Ok(checks_output(cfg, "verify frobenius", &[check]))
        }
        VerifyCmd::Motive { block, dump_block } => {
            let b = grammar::build_block_spec(block, cfg.p, cfg.e, cfg.ell, cfg.tdeg, cfg.prec)?;
            let rep = check_difference_equation(&b);
            let mut payload = json!({
                "pass": rep.pass,
                "report": serde_json::to_value(&rep).expect("serializable"),
            });
            if *dump_block {
                payload["block"] = block_to_json(&b);
            }
            let text = format!(
                "{}: {} (window: tdeg {}, prec {})",
                rep.block,
                if rep.pass { "PASS" } else { "FAIL" },
                rep.verified_tdeg,
                rep.verified_prec
            );
            emit(cfg, "verify motive", payload, text);
            Ok(u8::from(!rep.pass))
        }
    }
}

fn run_relation(what: &RelationCmd, cfg: &Config) -> CliResult<u8> {
    let es = |e: Error| e.to_string();
    match what {
        RelationCmd::Find { values, deg_bound } => {
            let field = cfg.field()?;
            let text_data =
                fs::read_to_string(values).map_err(|e| format!("cannot read {values}: {e}"))?;
            let mut series = Vec::new();
            for (i, line) in text_data.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let v: Value = serde_json::from_str(line)
                    .map_err(|e| format!("line {}: invalid JSON: {e}", i + 1))?;
                series.push(laurent_from_json(&field, &v).map_err(es)?);
            }
            if series.is_empty() {
                return Err("values file contains no series".into());
            }
            let scale = field.order() as i64 - 1;
            let min_prec = series.iter().map(Laurent::prec).min().unwrap();
            let window = cfg.prec.min(min_prec - *deg_bound as i64 * scale);
            if window <= 0 {
                return Err("inputs carry too little precision for this degree bound".into());
            }
            let rel = find_k_linear_relation(&series, *deg_bound, window).map_err(es)?;
            let payload = json!({
                "candidate": true,
                "window_prec": window,
                "deg_bound": deg_bound,
                "relation": rel.as_ref().map(|cs| {
                    cs.iter().map(|c| c.to_string()).collect::<Vec<_>>()
                }),
            });
            let text = match &rel {
                Some(cs) => format!(
                    "candidate relation (window u^{window}): {}",
                    cs.iter()
                        .enumerate()
                        .map(|(i, c)| format!("({c})*v{i}"))
                        .collect::<Vec<_>>()
                        .join(" + ")
                ),
                None => format!("no relation on the window below u^{window}"),
            };
            emit(cfg, "relation find", payload, text);
            Ok(0)
        }
        RelationCmd::AndersonThakur { n } => {
            let field = cfg.field()?;
            match anderson_thakur_coeffs(&field, *n, cfg.prec) {
                Ok(cert) => {
                    let text = format!(
                        "zeta({}) = {}; residual zero through u^{}",
                        n,
                        cert.h
                            .iter()
                            .enumerate()
                            .map(|(i, h)| format!("({h})*L[θ^{i},{n}](θ)"))
                            .collect::<Vec<_>>()
                            .join(" + "),
                        cert.residual_prec
                    );
                    emit(
                        cfg,
                        "relation anderson-thakur",
                        json!({"certificate": cert.to_json()}),
                        text,
                    );
                    Ok(0)
                }
                Err(Error::ResourceCap(msg)) => {
                    eprintln!("undetermined: {msg}");
                    Ok(1)
                }
                Err(e) => Err(e.to_string()),
            }
        }
    }
}
