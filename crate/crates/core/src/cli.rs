//! The `dbgen` command line.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::analysis::{debug_report, plan_functions};
use crate::emit::emit_module;
use crate::frontend::{parse_module, render_source, tokenize, FrontendError};
use crate::term::{check_law, Bounds, Law};
use crate::validate::{validate_grammar, ValidGrammar};

pub const USAGE: &str = "usage: dbgen [ -version ][ -debug ] in-file out-file";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SYNTAX: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_IO: i32 = 4;
/// `selftest` found a counterexample.
pub const EXIT_LAW: i32 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Version,
    SelfTest,
    Generate(CliInvocation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliInvocation {
    pub show_version: bool,
    pub debug: bool,
    pub in_file: PathBuf,
    pub out_file: PathBuf,
}

/// Reads the arguments after the program name. `-version` anywhere wins.
pub fn parse_args<S: AsRef<str>>(args: &[S]) -> Option<Command> {
    let args: Vec<&str> = args.iter().map(AsRef::as_ref).collect();
    if args.contains(&"-version") {
        return Some(Command::Version);
    }
    if args == ["selftest"] {
        return Some(Command::SelfTest);
    }
    let (debug, rest) = match args.split_first() {
        Some((&"-debug", rest)) => (true, rest),
        _ => (false, &args[..]),
    };
    match rest {
        [input, output] if !input.starts_with('-') && !output.starts_with('-') => {
            Some(Command::Generate(CliInvocation {
                show_version: false,
                debug,
                in_file: input.into(),
                out_file: output.into(),
            }))
        }
        _ => None,
    }
}

/// Runs the tool and returns its exit code.
pub fn run<S: AsRef<str>>(args: &[S], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match parse_args(args) {
        None => {
            let _ = writeln!(stderr, "{USAGE}");
            EXIT_USAGE
        }
        Some(Command::Version) => {
            let _ = writeln!(stdout, "dbgen {}", crate::VERSION);
            EXIT_OK
        }
        Some(Command::SelfTest) => self_test(stderr),
        Some(Command::Generate(inv)) => generate(&inv, stderr),
    }
}

fn generate(inv: &CliInvocation, stderr: &mut dyn Write) -> i32 {
    let name = inv.in_file.display();
    let text = match std::fs::read_to_string(&inv.in_file) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "dbgen: cannot read {name}: {e}");
            return EXIT_IO;
        }
    };
    let tokens = match tokenize(&text) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "dbgen: {name}: {}", FrontendError::from(e));
            return EXIT_SYNTAX;
        }
    };
    if inv.debug {
        let _ = writeln!(stderr, "== tokens ==");
        for t in &tokens {
            let _ = writeln!(stderr, "{t}");
        }
    }
    let source = match parse_module(&tokens) {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(stderr, "dbgen: {name}: {}", FrontendError::from(e));
            return EXIT_SYNTAX;
        }
    };
    if inv.debug {
        let _ = write!(stderr, "== grammar ==\n{}", render_source(&source));
    }
    let g = match validate_grammar(source) {
        Ok(g) => g,
        Err(errors) => {
            for e in errors {
                let _ = writeln!(stderr, "dbgen: {name}: {e}");
            }
            return EXIT_INVALID;
        }
    };
    if inv.debug {
        let _ = write!(stderr, "{}", debug_report(&g));
    }
    let plan = plan_functions(&g);
    let out = emit_module(&g, &plan);
    match write_atomically(&inv.out_file, out.rendered.as_bytes()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "dbgen: cannot write {}: {e}", inv.out_file.display());
            EXIT_IO
        }
    }
}

/// Replaces `path` with `bytes` through a temporary file in the same
/// directory, so readers see the old file or the new one.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Grammars checked by `selftest`, with their term size and index bounds.
pub const SELFTEST_CORPUS: [(&str, &str, usize, u64); 5] = [
    ("lambda.v", include_str!("../corpus/valid/lambda.v"), 5, 3),
    ("system_f.v", include_str!("../corpus/valid/system_f.v"), 4, 3),
    ("mutual.v", include_str!("../corpus/valid/mutual.v"), 4, 2),
    ("counted.v", include_str!("../corpus/valid/counted.v"), 3, 2),
    ("two_sorts_one_binder.v", include_str!("../corpus/valid/two_sorts_one_binder.v"), 4, 2),
];

fn self_test(stderr: &mut dyn Write) -> i32 {
    let mut failures = 0;
    for (name, text, size, index) in SELFTEST_CORPUS {
        let g: ValidGrammar = validate_grammar(crate::parse_source(text).expect("embedded corpus parses"))
            .expect("embedded corpus validates");
        let bounds = Bounds::new(size, index);
        for law in Law::ALL {
            let start = Instant::now();
            match check_law(&g, law, &bounds) {
                Ok(r) => {
                    let _ = writeln!(
                        stderr,
                        "ok   {name} {law}: {} instances in {:.2?}",
                        r.instances,
                        start.elapsed()
                    );
                }
                Err(c) => {
                    failures += 1;
                    let _ = writeln!(stderr, "FAIL {name} {c}");
                }
            }
        }
    }
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_LAW
    }
}
