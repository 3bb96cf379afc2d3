//! Command line front end: loads a triple description, runs one command, and
//! returns the report together with an exit code.
//!
//! Exit codes: 0 success or holds, 1 counterexample, distinct or false,
//! 2 unknown or depth exceeded, 3 input error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::action::{ResidualVerdict, SelfSimilarTriple, Site};
use crate::corona::{parse_sequence, CoronaElement};
use crate::germ::{hausdorff_report, GermError, Groupoid, HausdorffVerdict, ModelCondition, ModelVerdict};
use crate::graph::EdgeId;
use crate::group::{Group, GroupElement};
use crate::path::{InfPath, Path};
use crate::semigroup::{EStarVerdict, InverseSemigroup};
use crate::spec_file::parse_spec;
use crate::verdict::Equality;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "selfsim", version, about = "Self-similar group actions on finite graphs")]
pub struct Cli {
    /// Triple description file.
    pub spec: PathBuf,
    #[command(subcommand)]
    pub command: Command,
    /// Depth for infinite paths, sequences and automaton equality.
    #[arg(long, global = true, env = "SELFSIM_DEPTH", default_value_t = 64)]
    pub depth: usize,
    /// Radius of the group window used by sweeps.
    #[arg(long, global = true, env = "SELFSIM_WINDOW", default_value_t = 4)]
    pub window: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the graph and the action and cocycle axioms on the window.
    Validate,
    /// `g·α` and `φ(g, α)`; for an infinite path also `Φ(g, ξ)`.
    Act {
        #[arg(allow_hyphen_values = true)]
        g: String,
        alpha: String,
    },
    /// `φ(g, α)`, or `Φ(g, ξ)` for an infinite path.
    Phi {
        #[arg(allow_hyphen_values = true)]
        g: String,
        alpha: String,
    },
    /// Product of two semigroup elements `(α, g, β)` or `0`.
    Smul { s: String, t: String },
    /// Whether the idempotents of the given paths cover the idempotent of the target.
    Cover { target: String, members: Vec<String> },
    /// Search the window for `g ≠ 1` fixing an edge with trivial restriction.
    ResidualFree,
    /// Search for a non-idempotent element above a nonzero idempotent.
    EStarUnitary {
        /// Longest path considered.
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Equality of two germs `[α, g, β; η]`.
    GermEq { u: String, v: String },
    /// The lag of a germ.
    Lag { u: String },
    /// Membership of `(η, (ǧ, k), ζ)` in the concrete groupoid.
    ModelCheck {
        eta: String,
        g: String,
        #[arg(allow_hyphen_values = true)]
        k: i64,
        zeta: String,
    },
    /// Whether residual freeness guarantees a Hausdorff groupoid.
    Hausdorff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

struct Out {
    lines: Vec<String>,
}

impl Out {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

/// Parses arguments (the first is the program name) and runs the command.
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Report { stdout: String::new(), stderr: text, code }
            } else {
                Report { stdout: text, stderr: String::new(), code }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Report {
    let text = match std::fs::read_to_string(&cli.spec) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", cli.spec.display())),
    };
    let triple = match parse_spec(&text) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", cli.spec.display())),
    };
    let mut out = Out { lines: vec![format!("# {}", echo(&cli.command))] };
    match execute(cli, &triple, &mut out) {
        Ok(code) => Report { stdout: join(&out.lines), stderr: String::new(), code },
        Err(InputError(msg)) => Report { stdout: join(&out.lines), stderr: format!("error: {msg}\n"), code: EXIT_INPUT },
    }
}

fn input_error(msg: String) -> Report {
    Report { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_INPUT }
}

fn join(lines: &[String]) -> String {
    let mut s = lines.join("\n");
    s.push('\n');
    s
}

fn echo(c: &Command) -> String {
    match c {
        Command::Validate => "validate".into(),
        Command::Act { g, alpha } => format!("act {g} {alpha}"),
        Command::Phi { g, alpha } => format!("phi {g} {alpha}"),
        Command::Smul { s, t } => format!("smul {s} {t}"),
        Command::Cover { target, members } => {
            let mut s = format!("cover {target}");
            for m in members {
                s.push(' ');
                s.push_str(m);
            }
            s
        }
        Command::ResidualFree => "residual-free".into(),
        Command::EStarUnitary { bound } => format!("e-star-unitary --bound {bound}"),
        Command::GermEq { u, v } => format!("germ-eq {u} {v}"),
        Command::Lag { u } => format!("lag {u}"),
        Command::ModelCheck { eta, g, k, zeta } => format!("model-check {eta} {g} {k} {zeta}"),
        Command::Hausdorff => "hausdorff".into(),
    }
}

fn edge_name(t: &SelfSimilarTriple, e: EdgeId) -> String {
    t.edge_name(e)
}

fn counterexample(t: &SelfSimilarTriple, g: &GroupElement, e: EdgeId) -> String {
    let key = if matches!(t.group(), Group::Integers) { "m" } else { "g" };
    format!("({key}={}, e={})", t.group().render(g), edge_name(t, e))
}

fn execute(cli: &Cli, t: &SelfSimilarTriple, out: &mut Out) -> Result<i32, InputError> {
    let grp = t.group();
    let window = grp.window(cli.window);
    let depth = cli.depth;

    let axioms = t.verify_axioms(&window);
    if let Command::Validate = cli.command {
        let g = t.graph();
        out.line(format!("graph: {} vertices, {} edges, no sources", g.vertex_count(), g.edge_count()));
        for v in &axioms.violations {
            let site = match v.site {
                Site::None => String::new(),
                Site::Vertex(x) => format!(" at vertex {}", g.vertex_label(x)),
                Site::Edge(e) => format!(" at edge {}", edge_name(t, e)),
            };
            let el = |x: &Option<GroupElement>| x.as_ref().map(|x| grp.render(x)).unwrap_or_else(|| "-".into());
            out.line(format!("violation: {:?} g={} h={}{site}", v.law, el(&v.g), el(&v.h)));
        }
        let scope = format!("{} elements, window radius {}", window.len(), cli.window);
        return Ok(if !axioms.is_ok() {
            out.line(format!("axioms: {} violations ({scope})", axioms.violations.len()));
            EXIT_FALSE
        } else if axioms.undecided > 0 {
            out.line(format!(
                "axioms: no violation, {} of {} checks undecided at depth {depth} ({scope})",
                axioms.undecided, axioms.checked
            ));
            EXIT_UNKNOWN
        } else {
            out.line(format!("axioms: ok, {} checks ({scope})", axioms.checked));
            EXIT_OK
        });
    }
    if !axioms.is_ok() {
        return Err(InputError(format!(
            "the action violates {:?}; run `validate` for the full list",
            axioms.violations[0].law
        )));
    }

    let graph = t.graph();
    let elem = |s: &str| grp.parse(s).map_err(InputError::from);
    let path = |s: &str| Path::parse(graph, s).map_err(InputError::from);
    let infinite = |s: &str| InfPath::parse(graph, s).map_err(InputError::from);
    let sg = InverseSemigroup::new(t);
    let groupoid = || -> Result<Groupoid<'_>, i32> {
        match Groupoid::new(t, &window, depth) {
            Ok(g) => Ok(g),
            Err(GermError::NotResiduallyFree { .. }) => Err(EXIT_FALSE),
            Err(_) => Err(EXIT_INPUT),
        }
    };
    let refuse = |out: &mut Out| {
        if let ResidualVerdict::CounterExample { g, e } = t.check_residually_free(&window).verdict {
            out.line(format!("refused: not residually free, counterexample {}", counterexample(t, &g, e)));
        }
        EXIT_FALSE
    };

    match &cli.command {
        Command::Validate => unreachable!(),
        Command::Act { g, alpha } | Command::Phi { g, alpha } => {
            let g = elem(g)?;
            let act = matches!(cli.command, Command::Act { .. });
            if alpha.contains('(') {
                let xi = infinite(alpha)?;
                let img = t.infinite_image(&g, &xi, depth);
                let phi = img.phi.render(grp);
                if act {
                    out.line(format!("{} ; Phi {phi}", img.image.render(graph)));
                } else {
                    out.line(format!("Phi {phi}"));
                }
                Ok(EXIT_OK)
            } else {
                let a = path(alpha)?;
                let (img, phi) = t.act_and_cocycle(&g, &a);
                if act {
                    out.line(format!("{} ; cocycle {}", img.render(graph), grp.render(&phi)));
                } else {
                    out.line(grp.render(&phi));
                }
                Ok(EXIT_OK)
            }
        }
        Command::Smul { s, t: u } => {
            let a = sg.parse(s)?;
            let b = sg.parse(u)?;
            out.line(sg.render(&sg.mul(&a, &b)));
            Ok(EXIT_OK)
        }
        Command::Cover { target, members } => {
            let target = path(target)?;
            let members = members.iter().map(|m| path(m)).collect::<Result<Vec<_>, _>>()?;
            for m in &members {
                if !target.is_prefix_of(m) {
                    out.line(format!("ignored {}: not below the target", m.render(graph)));
                }
            }
            if sg.is_cover(&members, &target) {
                out.line("cover: yes");
                Ok(EXIT_OK)
            } else {
                out.line("cover: no");
                Ok(EXIT_FALSE)
            }
        }
        Command::ResidualFree => {
            let report = t.check_residually_free(&window);
            for i in &report.inconsistencies {
                out.line(format!("inconsistency: {i}"));
            }
            Ok(match report.verdict {
                ResidualVerdict::Holds { window } => {
                    out.line(format!("residually free: holds on the whole group ({window} elements)"));
                    EXIT_OK
                }
                ResidualVerdict::CounterExample { g, e } => {
                    out.line(format!("counterexample {}", counterexample(t, &g, e)));
                    EXIT_FALSE
                }
                ResidualVerdict::UnknownBeyondWindow { window: n } => {
                    out.line(format!(
                        "no counterexample among {n} elements (window radius {}); unknown beyond",
                        cli.window
                    ));
                    EXIT_UNKNOWN
                }
            })
        }
        Command::EStarUnitary { bound } => Ok(match sg.check_e_star_unitary(&window, *bound) {
            EStarVerdict::Holds { window } => {
                out.line(format!("E*-unitary: holds ({window} elements, paths up to length {bound})"));
                EXIT_OK
            }
            EStarVerdict::CounterExample { s, e } => {
                out.line(format!("counterexample s={} e={}", sg.render(&s), sg.render(&e)));
                EXIT_FALSE
            }
            EStarVerdict::Unknown { window, bound } => {
                out.line(format!(
                    "no counterexample among {window} elements and paths up to length {bound}; unknown beyond"
                ));
                EXIT_UNKNOWN
            }
        }),
        Command::GermEq { u, v } => {
            let gd = match groupoid() {
                Ok(g) => g,
                Err(_) => return Ok(refuse(out)),
            };
            let a = gd.parse(u)?;
            let b = gd.parse(v)?;
            Ok(equality_line(out, gd.germ_eq(&a, &b)))
        }
        Command::Lag { u } => {
            let gd = match groupoid() {
                Ok(g) => g,
                Err(_) => return Ok(refuse(out)),
            };
            let a = gd.parse(u)?;
            let lag = gd.lag(&a);
            if let CoronaElement::Bounded(_) = lag.corona {
                out.line(format!("{} (known to depth {depth} only)", lag.render(grp)));
                Ok(EXIT_UNKNOWN)
            } else {
                out.line(lag.render(grp));
                Ok(EXIT_OK)
            }
        }
        Command::ModelCheck { eta, g, k, zeta } => {
            let gd = match groupoid() {
                Ok(g) => g,
                Err(_) => return Ok(refuse(out)),
            };
            let eta = infinite(eta)?;
            let zeta = infinite(zeta)?;
            let seq = parse_sequence(grp, g)?;
            Ok(match gd.model_check(&eta, &seq, *k, &zeta) {
                ModelVerdict::Holds { p, q, exact: true } => {
                    out.line(format!("holds with p={p}, q={q}"));
                    let germ = gd.pullback(&eta, &seq, &zeta, p, q)?;
                    out.line(format!("germ {}", gd.render(&germ)));
                    EXIT_OK
                }
                ModelVerdict::Holds { p, q, exact: false } => {
                    out.line(format!("no violation up to depth {depth} with p={p}, q={q}"));
                    EXIT_UNKNOWN
                }
                ModelVerdict::Fails { n, condition } => {
                    let what = match condition {
                        ModelCondition::Recursion => format!("recursion fails at n={n}"),
                        ModelCondition::Letter => format!("letter condition fails at n={n}"),
                        ModelCondition::Range => "no admissible split p - q = k".to_string(),
                    };
                    out.line(format!("fails: {what} (smallest split)"));
                    EXIT_FALSE
                }
                ModelVerdict::UnknownAtDepth(d) => {
                    out.line(format!("unknown at depth {d}"));
                    EXIT_UNKNOWN
                }
            })
        }
        Command::Hausdorff => Ok(match hausdorff_report(t, &window) {
            HausdorffVerdict::Hausdorff { proven: true } => {
                out.line("Hausdorff: residually free on the whole group");
                EXIT_OK
            }
            HausdorffVerdict::Hausdorff { proven: false } => {
                out.line(format!(
                    "Hausdorff if residually free: no counterexample within window radius {}",
                    cli.window
                ));
                EXIT_UNKNOWN
            }
            HausdorffVerdict::NotImpliedByCheck { g, e } => {
                out.line(format!("criterion does not apply: counterexample {}", counterexample(t, &g, e)));
                EXIT_FALSE
            }
        }),
    }
}

fn equality_line(out: &mut Out, eq: Equality) -> i32 {
    match eq {
        Equality::Equal => {
            out.line("equal");
            EXIT_OK
        }
        Equality::Distinct => {
            out.line("distinct");
            EXIT_FALSE
        }
        Equality::UnknownAtDepth(d) => {
            out.line(format!("unknown at depth {d}"));
            EXIT_UNKNOWN
        }
    }
}
