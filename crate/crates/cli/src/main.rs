use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use fo2alt::classify::Synthesis;
use fo2alt::json::{monoid_from_json, MonoidFile};
use fo2alt::language::{combine_infty, syntactic_quotient, validate_recognition, DEFAULT_SIZE_CAP};
use fo2alt::logic::{solve_game, Side};
use fo2alt::term::{satisfies_identity, Identity, IdentityBudget};
use fo2alt::varieties::{kd_quotient, min_level};
use fo2alt::{
    classify, is_open, synthesize_sigma21_formula, AutomataLanguage, Error, GameConfig, GreenData, OrderedMonoid,
    RecognizedLanguage, TopologyKind, Universe, UpWord,
};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMAS: &str = r#"Input formats:
  monoid.json     {"size": 2, "neutral": 0, "mul": [[0, 1], [1, 1]],
                   "order": [[1, 0]], "letters": {"a": 1}}
                  "order" lists pairs s <= t; the reflexive-transitive closure is taken.
  language.json   {"finite": <automaton or null>, "infinite": <automaton or null>}
                  the finite part is an NFA, the infinite part a Büchi automaton
  automaton       {"states": ["p", "q"], "alphabet": ["a", "b"], "initial": ["p"],
                   "transitions": [["p", "a", "q"], ["q", "a", "q"], ["q", "b", "q"]],
                   "accepting": ["q"]}            ("final" is accepted for "accepting")
  identity        "(z*x2)^w * z * (y2*z)^w <= (z*x2)^w * (y2*z)^w", or "=" for equations
  word            ab(ba)^w for an infinite word, ab for a finite one, ε or "" for empty
  formula         E x (a(x) & E y (x<y & b(y))), with ! | & T F x=y x<y

Exit status: 0 decided, 1 input error, 2 resource cap exceeded."#;

#[derive(Parser)]
#[command(name = "fo2alt", version, about = "Quantifier alternation in two-variable logic over finite and infinite words", after_help = SCHEMAS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Universe of words the language lives in.
    #[arg(long, global = true, value_enum, default_value_t = UniverseArg::Infty)]
    universe: UniverseArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the sampled advisory checks of `validate`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Size cap for recognizing monoids built from automata.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check a monoid file or a language file.
    Validate {
        file: PathBuf,
        /// Random words compared against the automata (advisory).
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Syntactic ordered monoid of a language.
    Syntactic { language: PathBuf },
    /// Green's R, L and J classes of a monoid.
    Green { monoid: PathBuf },
    /// Check an identity such as `1 <= z` on a monoid.
    Identity { monoid: PathBuf, identity: String },
    /// Quotient of a monoid by the KD preorder.
    KdQuotient { monoid: PathBuf },
    /// Least alternation level of a monoid.
    Level { monoid: PathBuf },
    /// Alternation level of a language.
    Classify { language: PathBuf },
    /// Openness of a language in the Cantor or alphabetic topology.
    Open {
        #[arg(long, value_enum)]
        topology: TopologyArg,
        language: PathBuf,
    },
    /// Membership of an ultimately periodic word.
    Member { language: PathBuf, word: String },
    /// Solve the EF game: does every Σ²_{m,n} sentence true on u hold on v?
    Ef {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        u: String,
        v: String,
    },
    /// Σ²_1 formula for a level-1 language over finite and infinite words.
    Synth { language: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum UniverseArg {
    Infty,
    Omega,
    Star,
}

impl From<UniverseArg> for Universe {
    fn from(u: UniverseArg) -> Self {
        match u {
            UniverseArg::Infty => Universe::Infty,
            UniverseArg::Omega => Universe::Omega,
            UniverseArg::Star => Universe::Star,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Cantor,
    Alphabetic,
}

struct Report {
    json: Value,
    text: String,
}

fn report(value: impl Serialize, text: String) -> Report {
    Report {
        json: serde_json::to_value(value).expect("reports serialize"),
        text,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_monoid(path: &Path) -> Result<OrderedMonoid, Error> {
    monoid_from_json(&read(path)?).map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn load_language(path: &Path, cap: usize) -> Result<RecognizedLanguage, Error> {
    let lang = AutomataLanguage::from_json(&read(path)?).map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    let r = combine_infty(lang.finite.as_ref(), lang.infinite.as_ref(), cap)?;
    Ok(r.with_source(Arc::new(lang)))
}

fn letters(word: &str) -> Vec<char> {
    match word {
        "ε" => Vec::new(),
        w => w.chars().collect(),
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let universe = Universe::from(cli.universe);
    match &cli.command {
        Command::Validate { file, samples } => {
            let text = read(file)?;
            let value: Value =
                serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", file.display())))?;
            if value.get("mul").is_some() {
                let m = load_monoid(file)?;
                let out = json!({"kind": "monoid", "size": m.size(), "valid": true});
                Ok(report(out, format!("valid ordered monoid of size {}", m.size())))
            } else {
                let l = load_language(file, cli.cap)?;
                let r = validate_recognition(&l, *samples, cli.seed)?;
                let clean = r.conjugacy.is_none() && r.upward.is_none();
                let sampled = r.sampling.as_ref().map_or(0, |s| s.disagreements);
                let out = json!({
                    "kind": "language",
                    "monoid_size": l.monoid().size(),
                    "closed": clean,
                    "conjugacy_violation": r.conjugacy,
                    "upward_violation": r.upward,
                    "advisory_sampling": r.sampling,
                });
                let text = format!(
                    "recognizer of size {}: {}\nadvisory sampling: {} disagreements in {} words",
                    l.monoid().size(),
                    if clean {
                        "closed under conjugacy and order"
                    } else {
                        "NOT closed"
                    },
                    sampled,
                    samples
                );
                Ok(report(out, text))
            }
        }
        Command::Syntactic { language } => {
            let s = syntactic_quotient(&load_language(language, cli.cap)?)?;
            let m = s.language.monoid();
            let accepted = s.language.accepted_pairs();
            let text = format!(
                "syntactic monoid of size {} with {} accepted linked pairs\n{}",
                m.size(),
                accepted.len(),
                fo2alt::json::monoid_to_json(m)
            );
            let out = json!({"monoid": MonoidFile::from_monoid(m), "accepted": accepted});
            Ok(report(out, text))
        }
        Command::Green { monoid } => {
            let m = load_monoid(monoid)?;
            let c = GreenData::new(&m).classes();
            let text = format!("R: {:?}\nL: {:?}\nJ: {:?}", c.r, c.l, c.j);
            Ok(report(c, text))
        }
        Command::Identity { monoid, identity } => {
            let m = load_monoid(monoid)?;
            let id: Identity = identity.parse()?;
            let check = satisfies_identity(&m, &id, &IdentityBudget::default())?;
            let text = match &check.counterexample {
                None => format!("{id} holds"),
                Some(c) => format!("{id} fails at {c:?}"),
            };
            Ok(report(check, text))
        }
        Command::KdQuotient { monoid } => {
            let m = load_monoid(monoid)?;
            let q = kd_quotient(&m)?;
            let file = MonoidFile::from_monoid(&q.monoid);
            let text = format!(
                "quotient of size {}, projection {:?}\n{}",
                q.monoid.size(),
                q.projection,
                fo2alt::json::monoid_to_json(&q.monoid)
            );
            Ok(report(json!({"monoid": file, "projection": q.projection}), text))
        }
        Command::Level { monoid } => {
            let r = min_level(&load_monoid(monoid)?)?;
            let text = match (r.level, r.diagnostic) {
                (Some(k), _) => k.to_string(),
                (None, Some(d)) => format!("none ({})", serde_json::to_value(d).expect("serializes")),
                (None, None) => "none".into(),
            };
            Ok(report(r, text))
        }
        Command::Classify { language } => {
            let c = classify(&load_language(language, cli.cap)?, universe)?;
            let text = match c.level {
                Some(k) => format!("FO2-definable over {universe}, level {k}"),
                None => format!("not FO2-definable over {universe}"),
            };
            Ok(report(c, text))
        }
        Command::Open { topology, language } => {
            let kind = match (topology, universe) {
                (TopologyArg::Cantor, Universe::Infty) => TopologyKind::CantorInfty,
                (TopologyArg::Alphabetic, Universe::Infty) => TopologyKind::AlphabeticInfty,
                (TopologyArg::Cantor, Universe::Omega) => TopologyKind::CantorOmega,
                (TopologyArg::Alphabetic, Universe::Omega) => TopologyKind::AlphabeticOmega,
                (_, Universe::Star) => return Err(Error::Input("open needs --universe infty or omega".into())),
            };
            let l = fo2alt::language::make_alphabetic(&load_language(language, cli.cap)?)?;
            let v = is_open(&l, kind)?;
            let text = format!("{kind}: {}", if v.open { "open" } else { "not open" });
            Ok(report(v, text))
        }
        Command::Member { language, word } => {
            let w: UpWord = word.parse()?;
            let l = load_language(language, cli.cap)?;
            let member = l.member(&w)?;
            Ok(report(
                json!({"word": w.to_string(), "member": member}),
                member.to_string(),
            ))
        }
        Command::Ef { m, n, u, v } => {
            let (u, v) = (letters(u), letters(v));
            let out = solve_game(&u, &v, GameConfig::new(*m, *n)?)?;
            let text = match out.spoiler_move {
                None => "duplicator wins".to_string(),
                Some(mv) => format!("spoiler wins: {mv}"),
            };
            let mv = out.spoiler_move.map(|mv| {
                json!({
                    "side": match mv.side { Side::Left => "left", Side::Right => "right" },
                    "pebble": mv.pebble.to_string(),
                    "position": mv.position + 1,
                })
            });
            Ok(report(
                json!({"duplicator_wins": out.duplicator_wins, "spoiler_move": mv}),
                text,
            ))
        }
        Command::Synth { language } => {
            let Synthesis { formula, minimal_words } = synthesize_sigma21_formula(&load_language(language, cli.cap)?)?;
            let words: Vec<String> = minimal_words.iter().map(|w| w.iter().collect()).collect();
            let text = formula.to_string();
            Ok(report(json!({"formula": text, "minimal_words": words}), text))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(r) => {
            let out = match cli.format {
                Format::Json => serde_json::to_string_pretty(&r.json).expect("serializes"),
                Format::Text => r.text,
            };
            // a closed pipe is not an error
            let _ = writeln!(io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
