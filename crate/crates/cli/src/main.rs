//! `quadunit`: command-line access to the unit-index computations.
//!
//! Every command prints one envelope on stdout. Exit codes: 0 ok, 2 usage,
//! 3 domain error, 4 verification failure.

mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use quadunit_core::cfrac::{expand, QuadIrr};
use quadunit_core::classgroup::kernel_check;
use quadunit_core::families::{family_members, survey, FamilyKind};
use quadunit_core::ideals::{extension_is_2o, ideal_mul, is_principal_a, IdealA};
use quadunit_core::units::{odd_pell_oracle, unit_index};
use quadunit_core::{Error, IterCap};
use serde_json::{json, Value};

use crate::output::{big, big_list, envelope, exit_code, quad, render, Format};

#[derive(Parser, Debug)]
#[command(
    name = "quadunit",
    version,
    about = "Unit index of Z[√N] in the maximal order, computed exactly"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Step budget for continued-fraction expansions.
    #[arg(
        long,
        global = true,
        env = "QUADUNIT_MAX_ITER",
        default_value_t = 1_000_000
    )]
    max_iter: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction of (P + √N)/Q.
    Cf {
        n: BigInt,
        #[arg(long = "P", default_value_t = BigInt::from(0), allow_hyphen_values = true)]
        p: BigInt,
        #[arg(long = "Q", default_value_t = BigInt::from(1), allow_hyphen_values = true)]
        q: BigInt,
        /// Overrides --max-iter for this expansion.
        #[arg(long)]
        max_terms: Option<usize>,
    },
    /// Fundamental units and the index e for square-free N ≡ 1 (mod 4).
    Index {
        n: u64,
        /// Also run the brute-force odd ±4 Pell search up to this y (N ≡ 5 mod 8).
        #[arg(long)]
        oracle_bound: Option<u64>,
    },
    /// Members of a parametric family: a2+4, a2-4 or 4a2+1.
    Family {
        kind: String,
        #[arg(long)]
        a_min: u64,
        #[arg(long)]
        a_max: u64,
        /// Verify continued fractions, equivalences and e for each member.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        squarefree_only: bool,
    },
    /// Narrow class numbers h⁺(N), h⁺(4N) and the kernel of Cl(Z[√N]) → Cl(O_N).
    Classgroup { n: u64 },
    /// Checks on the ideals [4, √N ± 1].
    Ideal {
        action: IdealAction,
        n: u64,
        #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
        sign: i8,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IdealAction {
    /// [4, √N ± 1]² against 2·[4, √N ∓ 1].
    Square,
    /// Principality of [4, √N ± 1] in Z[√N].
    Principal,
    /// Whether 2 and (√N ± 1)/2 generate the maximal order.
    Extend,
}

fn parse_sign(s: &str) -> Result<i8, String> {
    match s {
        "+" | "plus" => Ok(1),
        "-" | "minus" => Ok(-1),
        other => Err(format!("sign must be + or -, got {other:?}")),
    }
}

fn sign_char(sign: i8) -> char {
    if sign >= 0 {
        '+'
    } else {
        '-'
    }
}

fn cmd_cf(n: &BigInt, p: &BigInt, q: &BigInt, cap: IterCap) -> Result<Value, Error> {
    let alpha = QuadIrr::new(p.clone(), q.clone(), n.clone())?;
    let exp = expand(&alpha, cap)?;
    let states: Vec<Value> = exp
        .cycle_states
        .iter()
        .map(|(p, q)| json!([big(p), big(q)]))
        .collect();
    Ok(json!({
        "alpha": alpha.to_string(),
        "preperiod": big_list(&exp.preperiod),
        "period": big_list(&exp.period),
        "period_length": exp.period_length(),
        "cycle_states": states,
    }))
}

fn cmd_index(n: u64, oracle_bound: Option<u64>, cap: IterCap) -> Result<Value, Error> {
    let r = unit_index(n, cap)?;
    let oracle = match oracle_bound {
        Some(bound) if n % 8 == 5 => {
            let found = odd_pell_oracle(n, bound)?;
            let expected = r
                .odd_pell
                .clone()
                .filter(|(_, y)| *y <= BigInt::from(bound));
            if found != expected {
                return Err(Error::InvariantViolation(format!(
                    "N = {n}: odd Pell oracle up to y = {bound} disagrees with the parity of ε_O"
                )));
            }
            json!({
                "bound": bound,
                "found": found.as_ref().map(|(x, y)| json!([big(x), big(y)])),
                "agrees": true,
            })
        }
        _ => Value::Null,
    };
    Ok(json!({
        "epsilon_O": quad(&r.epsilon_o),
        "epsilon_A": quad(&r.epsilon_a),
        "e": r.e,
        "norm": r.norm_a,
        "period_length": r.period_length,
        "odd_pell": r.odd_pell.as_ref().map(|(x, y)| json!({"x": big(x), "y": big(y)})),
        "methods": {
            "parity": r.methods.parity,
            "cf_equivalence": r.methods.cf_plus,
            "oracle": oracle,
        },
    }))
}

fn cmd_family(
    kind: &str,
    a_min: u64,
    a_max: u64,
    verify: bool,
    squarefree_only: bool,
    cap: IterCap,
) -> Result<Value, Error> {
    let kind: FamilyKind = kind.parse()?;
    let mut rows = if verify {
        survey(kind, a_min, a_max, cap)?
    } else {
        family_members(kind, a_min, a_max, squarefree_only)?
    };
    rows.retain(|r| r.squarefree || !squarefree_only);
    let verified = rows.iter().filter(|r| r.observed_e.is_some()).count();
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "a": r.a,
                "N": r.n,
                "squarefree": r.squarefree,
                "predicted_e": r.predicted_e,
                "observed_e": r.observed_e,
                "cf_pattern_ok": r.cf_pattern_ok,
                "equivalence_ok": r.equivalence_ok,
            })
        })
        .collect();
    Ok(json!({
        "kind": kind.to_string(),
        "rows": rows,
        "verified_rows": verified,
    }))
}

fn cmd_classgroup(n: u64, cap: IterCap) -> Result<Value, Error> {
    let c = kernel_check(n, cap)?;
    Ok(json!({
        "h_plus_N": c.h_plus_o,
        "h_plus_4N": c.h_plus_a,
        "kernel_order": c.kernel_order,
        "predicted_e": c.predicted_e,
        "observed_e": c.observed_e,
        "i_plus_principal": c.i_plus_principal,
    }))
}

fn cmd_ideal(action: IdealAction, n: u64, sign: i8, cap: IterCap) -> Result<Value, Error> {
    let s = sign_char(sign);
    match action {
        IdealAction::Square => {
            let i = IdealA::i_pm(n, sign)?;
            let product = ideal_mul(&i, &i)?;
            let expected = IdealA::i_pm(n, -sign)?.scaled(2)?;
            Ok(json!({
                "lhs": format!("{i}^2"),
                "product": product.to_string(),
                "rhs": expected.to_string(),
                "equal": product == expected,
            }))
        }
        IdealAction::Principal => {
            let i = IdealA::i_pm(n, sign)?;
            Ok(json!({
                "ideal": i.to_string(),
                "norm": big(&i.norm()),
                "principal": is_principal_a(&i, cap)?,
            }))
        }
        IdealAction::Extend => {
            let whole = extension_is_2o(sign, n)?;
            Ok(json!({
                "ideal": format!("J{s} = 2[2,(√{n}{s}1)/2]"),
                "generated_is_O": whole,
                "conclusion": if whole { "J = 2·O" } else { "J ≠ 2·O" },
            }))
        }
    }
}

fn run(cli: &Cli) -> (&'static str, Value, Result<Value, Error>) {
    let cap = IterCap(cli.max_iter);
    match &cli.command {
        Command::Cf { n, p, q, max_terms } => {
            let cap = max_terms.map(IterCap).unwrap_or(cap);
            let inputs = json!({"N": big(n), "P": big(p), "Q": big(q), "max_iter": cap.0});
            ("cf", inputs, cmd_cf(n, p, q, cap))
        }
        Command::Index { n, oracle_bound } => (
            "index",
            json!({"N": n, "oracle_bound": oracle_bound, "max_iter": cap.0}),
            cmd_index(*n, *oracle_bound, cap),
        ),
        Command::Family {
            kind,
            a_min,
            a_max,
            verify,
            squarefree_only,
        } => (
            "family",
            json!({
                "kind": kind,
                "a_min": a_min,
                "a_max": a_max,
                "verify": verify,
                "squarefree_only": squarefree_only,
                "max_iter": cap.0,
            }),
            cmd_family(kind, *a_min, *a_max, *verify, *squarefree_only, cap),
        ),
        Command::Classgroup { n } => (
            "classgroup",
            json!({"N": n, "max_iter": cap.0}),
            cmd_classgroup(*n, cap),
        ),
        Command::Ideal { action, n, sign } => {
            let name = format!("{action:?}").to_lowercase();
            (
                "ideal",
                json!({"action": name, "N": n, "sign": sign_char(*sign).to_string(), "max_iter": cap.0}),
                cmd_ideal(*action, *n, *sign, cap),
            )
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    log::info!("running {:?}", cli.command);

    let (command, inputs, outcome) = run(&cli);
    let code = match &outcome {
        Ok(_) => 0,
        Err(e) => {
            log::error!("{command}: {e}");
            exit_code(e)
        }
    };
    print!(
        "{}",
        render(&envelope(command, inputs, &outcome), cli.format)
    );
    ExitCode::from(code as u8)
}
