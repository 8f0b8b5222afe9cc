//! Command-line surface: expression language, `eval`, `expand`, `check`, `suite`.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::{Args, Parser, Subcommand};

use crate::algebra::{Element, Product};
use crate::error::Error;
use crate::exactnum::{parse_rational, parse_tpoly, to_f64, TPoly};
use crate::maps::{del_n, del_n_t, s_map, sigma_m_op, tau_dual};
use crate::numeric::{EvalConfig, Evaluator};
use crate::regularize::reg;
use crate::relations::{self, Params, Side};
use crate::words::{Index, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Shuffle,
    TShuffle,
    Stuffle,
    TStuffle,
    Concat,
}

impl BinOp {
    pub const ALL: [BinOp; 5] = [
        BinOp::Shuffle,
        BinOp::TShuffle,
        BinOp::Stuffle,
        BinOp::TStuffle,
        BinOp::Concat,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Shuffle => "sh",
            BinOp::TShuffle => "tsh",
            BinOp::Stuffle => "st",
            BinOp::TStuffle => "tst",
            BinOp::Concat => ".",
        }
    }

    fn from_symbol(s: &str) -> Option<BinOp> {
        BinOp::ALL.into_iter().find(|op| op.symbol() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegKind {
    Sh,
    St,
    Tsh,
    Tst,
}

impl RegKind {
    pub const ALL: [RegKind; 4] = [RegKind::Sh, RegKind::St, RegKind::Tsh, RegKind::Tst];

    fn name(self) -> &'static str {
        match self {
            RegKind::Sh => "regsh",
            RegKind::St => "regst",
            RegKind::Tsh => "regtsh",
            RegKind::Tst => "regtst",
        }
    }

    fn product(self) -> Product {
        match self {
            RegKind::Sh => Product::Shuffle,
            RegKind::St => Product::Stuffle,
            RegKind::Tsh => Product::TShuffle,
            RegKind::Tst => Product::TStuffle,
        }
    }
}

/// Parsed expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Unit,
    Word(Word),
    Index(Vec<u32>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    S(TPoly, Box<Expr>),
    Tau(Box<Expr>),
    Del(u32, Box<Expr>),
    Delt(u32, Box<Expr>),
    Sigma(u32, Box<Expr>),
    SigmaBar(u32, Box<Expr>),
    Reg(RegKind, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Unit => f.write_str("1"),
            Expr::Word(w) => write!(f, "{w}"),
            Expr::Index(parts) => {
                let items: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "z({})", items.join(","))
            }
            Expr::Bin(op, a, b) => {
                match a.as_ref() {
                    Expr::Bin(inner, ..) if inner == op => write!(f, "{a}")?,
                    Expr::Bin(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, " {} ", op.symbol())?;
                match b.as_ref() {
                    Expr::Bin(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            Expr::S(p, a) => write!(f, "St({p}, {a})"),
            Expr::Tau(a) => write!(f, "tau({a})"),
            Expr::Del(n, a) => write!(f, "del({n}, {a})"),
            Expr::Delt(n, a) => write!(f, "delt({n}, {a})"),
            Expr::Sigma(m, a) => write!(f, "sigma({m}, {a})"),
            Expr::SigmaBar(m, a) => write!(f, "sigmabar({m}, {a})"),
            Expr::Reg(kind, a) => write!(f, "{}({a})", kind.name()),
        }
    }
}

/// What is statically known about the words of a subexpression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Domain {
    H0,
    H1,
    Any,
}

impl Domain {
    fn of_word(w: Word) -> Domain {
        if w.is_h0() {
            Domain::H0
        } else if w.is_h1() {
            Domain::H1
        } else {
            Domain::Any
        }
    }

    fn in_h1(self) -> bool {
        self != Domain::Any
    }

    fn join(self, other: Domain) -> Domain {
        match (self, other) {
            (Domain::H0, Domain::H0) => Domain::H0,
            (a, b) if a.in_h1() && b.in_h1() => Domain::H1,
            _ => Domain::Any,
        }
    }
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

const FUNCS: &[&str] = &[
    "St", "tau", "del", "delt", "sigma", "sigmabar", "regsh", "regst", "regtsh", "regtst", "z",
];

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(perr(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn uint(&mut self) -> Result<u32, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| perr(start, "expected a nonnegative integer"))
    }

    fn expr(&mut self) -> Result<(Expr, Domain), Error> {
        let (mut acc, mut dom) = self.term()?;
        let mut first: Option<BinOp> = None;
        loop {
            self.skip_ws();
            let at = self.pos;
            let op = match self.peek() {
                None | Some(b')') | Some(b',') => break,
                Some(b'.') => {
                    self.pos += 1;
                    BinOp::Concat
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let word = self.ident();
                    BinOp::from_symbol(word)
                        .ok_or_else(|| perr(at, format!("expected an operator, found {word:?}")))?
                }
                Some(c) => return Err(perr(at, format!("unexpected character {:?}", c as char))),
            };
            match first {
                Some(f) if f != op => {
                    return Err(perr(
                        at,
                        format!(
                            "mixing '{}' and '{}' needs parentheses",
                            f.symbol(),
                            op.symbol()
                        ),
                    ))
                }
                _ => first = Some(op),
            }
            let rhs_at = {
                self.skip_ws();
                self.pos
            };
            let (rhs, rdom) = self.term()?;
            dom = match op {
                BinOp::Stuffle | BinOp::TStuffle => {
                    if !dom.in_h1() {
                        return Err(perr(at, format!("left operand of '{}' is not in h1", op.symbol())));
                    }
                    if !rdom.in_h1() {
                        return Err(perr(rhs_at, format!("right operand of '{}' is not in h1", op.symbol())));
                    }
                    dom.join(rdom)
                }
                BinOp::Shuffle | BinOp::TShuffle => dom.join(rdom),
                BinOp::Concat => match (dom, rdom) {
                    (Domain::H0, Domain::H0) => Domain::H0,
                    (_, Domain::H0) | (_, Domain::H1) => Domain::H1,
                    _ => Domain::Any,
                },
            };
            acc = Expr::Bin(op, Box::new(acc), Box::new(rhs));
        }
        Ok((acc, dom))
    }

    fn inner(&mut self) -> Result<(Expr, Domain), Error> {
        self.skip_ws();
        let (e, d) = self.expr()?;
        self.skip_ws();
        Ok((e, d))
    }

    fn term(&mut self) -> Result<(Expr, Domain), Error> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(perr(start, "unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.inner()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'1') => {
                self.pos += 1;
                if self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    return Err(perr(start, "only the literal 1 is allowed as a number"));
                }
                Ok((Expr::Unit, Domain::H0))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                let save = self.pos;
                self.skip_ws();
                if self.peek() == Some(b'(') && FUNCS.contains(&name) {
                    self.pos += 1;
                    let out = self.call(name, start)?;
                    self.expect(b')')?;
                    return Ok(out);
                }
                self.pos = save;
                if !name.is_empty() && name.bytes().all(|c| c == b'x' || c == b'y') {
                    let w: Word = name.parse().map_err(|e: Error| perr(start, e.to_string()))?;
                    return Ok((Expr::Word(w), Domain::of_word(w)));
                }
                if FUNCS.contains(&name) {
                    return Err(perr(self.pos, format!("expected '(' after {name}")));
                }
                Err(perr(start, format!("unknown identifier {name:?}")))
            }
            Some(c) => Err(perr(start, format!("unexpected character {:?}", c as char))),
        }
    }

    fn comma(&mut self) -> Result<(), Error> {
        self.expect(b',')
    }

    fn call(&mut self, name: &str, start: usize) -> Result<(Expr, Domain), Error> {
        match name {
            "z" => {
                let mut parts = Vec::new();
                loop {
                    let at = self.pos;
                    let k = self.uint()?;
                    if k == 0 {
                        return Err(perr(at, "index parts must be positive"));
                    }
                    parts.push(k);
                    self.skip_ws();
                    if self.peek() == Some(b',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let dom = if parts[0] >= 2 { Domain::H0 } else { Domain::H1 };
                Ok((Expr::Index(parts), dom))
            }
            "St" => {
                self.skip_ws();
                let at = self.pos;
                let mut depth = 0i32;
                while let Some(c) = self.peek() {
                    match c {
                        b'(' => depth += 1,
                        b')' if depth == 0 => break,
                        b')' => depth -= 1,
                        b',' if depth == 0 => break,
                        _ => {}
                    }
                    self.pos += 1;
                }
                let p = parse_tpoly(&self.src[at..self.pos])
                    .map_err(|_| perr(at, "expected a polynomial in t"))?;
                self.comma()?;
                let (e, d) = self.inner()?;
                Ok((Expr::S(p, Box::new(e)), d))
            }
            "tau" => {
                let (e, d) = self.inner()?;
                let d = if d == Domain::H0 { Domain::H0 } else { Domain::Any };
                Ok((Expr::Tau(Box::new(e)), d))
            }
            "del" | "delt" | "sigma" | "sigmabar" => {
                let at = self.pos;
                let n = self.uint()?;
                if n == 0 && name.starts_with("del") {
                    return Err(perr(at, "derivation index must be positive"));
                }
                self.comma()?;
                let (e, d) = self.inner()?;
                let e = Box::new(e);
                let node = match name {
                    "del" => Expr::Del(n, e),
                    "delt" => Expr::Delt(n, e),
                    "sigma" => Expr::Sigma(n, e),
                    _ => Expr::SigmaBar(n, e),
                };
                Ok((node, d))
            }
            _ => {
                let kind = RegKind::ALL
                    .into_iter()
                    .find(|k| k.name() == name)
                    .ok_or_else(|| perr(start, format!("unknown function {name}")))?;
                let at = self.pos;
                let (e, d) = self.inner()?;
                if !d.in_h1() {
                    return Err(perr(at, format!("argument of {name} is not in h1")));
                }
                Ok((Expr::Reg(kind, Box::new(e)), Domain::H0))
            }
        }
    }
}

/// Parses an expression; syntax and domain errors carry a byte offset.
pub fn parse(src: &str) -> Result<Expr, Error> {
    let mut p = ExprParser { src, pos: 0 };
    let (e, _) = p.inner()?;
    if p.pos != src.len() {
        return Err(perr(p.pos, "unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluates with a formal parameter `t`.
pub fn evaluate(e: &Expr) -> Result<Element, Error> {
    let t = TPoly::t();
    Ok(match e {
        Expr::Unit => Element::one(),
        Expr::Word(w) => Element::word(*w),
        Expr::Index(parts) => Element::z(parts),
        Expr::Bin(op, a, b) => {
            let (a, b) = (evaluate(a)?, evaluate(b)?);
            match op {
                BinOp::Shuffle => a.shuffle(&b),
                BinOp::TShuffle => a.tshuffle(&b, &t),
                BinOp::Stuffle => a.stuffle(&b)?,
                BinOp::TStuffle => a.tstuffle(&b, &t)?,
                BinOp::Concat => a.concat(&b),
            }
        }
        Expr::S(p, a) => s_map(&evaluate(a)?, p),
        Expr::Tau(a) => tau_dual(&evaluate(a)?),
        Expr::Del(n, a) => del_n(&evaluate(a)?, *n),
        Expr::Delt(n, a) => del_n_t(&evaluate(a)?, *n),
        Expr::Sigma(m, a) => sigma_m_op(&evaluate(a)?, *m, false, Some(&t))?,
        Expr::SigmaBar(m, a) => sigma_m_op(&evaluate(a)?, *m, true, Some(&t))?,
        Expr::Reg(kind, a) => reg(&evaluate(a)?, kind.product(), &t)?,
    })
}

/// `zeta(k_1,...,k_n)` for h1 words, letters otherwise.
pub fn zeta_label(w: Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    match Index::from_word(w) {
        Ok(idx) => format!("zeta({idx})"),
        Err(_) => w.to_string(),
    }
}

#[derive(Parser, Debug)]
#[command(name = "tmzv", version, about = "Interpolated multiple zeta values: word algebra and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Numeric {
    /// Outer truncation bound M of the nested sums
    #[arg(long, default_value_t = 100_000)]
    terms: usize,
    /// Partial-sum length before the tail correction at depth 1
    #[arg(long, default_value_t = 1000)]
    terms_single: usize,
}

impl Numeric {
    fn evaluator(self) -> Result<Evaluator, Error> {
        Evaluator::new(EvalConfig {
            m: self.terms,
            m_single: self.terms_single,
            strict: true,
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate ζ^t(k) for an index such as 2,1
    Eval {
        index: String,
        /// Evaluate at a rational t
        #[arg(long, conflicts_with = "symbolic")]
        t: Option<String>,
        /// Print the expansion in classical MZVs
        #[arg(long)]
        symbolic: bool,
        #[command(flatten)]
        numeric: Numeric,
        #[arg(long)]
        json: bool,
    },
    /// Expand an expression in the word algebra
    Expand {
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Check one identity instance
    Check {
        name: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        numeric: Numeric,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        timings: bool,
    },
    /// Check the whole catalog
    Suite {
        /// Skip instances above this weight
        #[arg(long, default_value_t = u32::MAX)]
        weight_cap: u32,
        #[arg(long)]
        json: bool,
        /// Worker threads
        #[arg(long, default_value_t = 4)]
        jobs: usize,
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// List identity names
    List,
}

#[derive(Args, Debug, Default)]
struct ParamArgs {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    /// Index such as 2,1,3
    #[arg(long)]
    index: Option<String>,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    w1: Option<String>,
    #[arg(long)]
    w0: Option<String>,
}

impl ParamArgs {
    fn to_params(&self) -> Params {
        let mut p = Params::new();
        for (key, v) in [
            ("k", self.k),
            ("n", self.n),
            ("l", self.l),
            ("a", self.a),
            ("b", self.b),
            ("m", self.m),
        ] {
            if let Some(v) = v {
                p.set(key, v);
            }
        }
        for (key, v) in [
            ("index", &self.index),
            ("w", &self.w),
            ("w1", &self.w1),
            ("w0", &self.w0),
        ] {
            if let Some(v) = v {
                p.set(key, v.trim());
            }
        }
        p
    }
}

/// Exit status: 0 success, 1 a check failed, 2 usage or input error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Param(format!("output error: {e}"))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Eval {
            index,
            t,
            symbolic,
            numeric,
            json,
        } => {
            let idx: Index = index.parse()?;
            if symbolic {
                let e = s_map(&Element::index(&idx), &TPoly::t());
                if json {
                    writeln!(out, "{}", serde_json::to_string(&e).expect("serializable")).map_err(io)?;
                } else {
                    writeln!(out, "{}", e.render(zeta_label, "*")).map_err(io)?;
                }
                return Ok(EXIT_OK);
            }
            let ev = numeric.evaluator()?;
            let mut v = ev.zeta_t(&idx)?;
            if let Some(t) = t {
                v = v.at_t(to_f64(&parse_rational(&t)?));
            }
            if json {
                writeln!(out, "{}", v.to_json()).map_err(io)?;
            } else {
                writeln!(out, "{}", v.render(12)).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Expand { expr, json } => {
            let e = evaluate(&parse(&expr)?)?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&e).expect("serializable")).map_err(io)?;
            } else {
                writeln!(out, "{e}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Check {
            name,
            params,
            numeric,
            json,
            timings,
        } => {
            let ev = numeric.evaluator()?;
            let start = std::time::Instant::now();
            let inst = relations::build(&name, &params.to_params(), &ev)?;
            let ms = start.elapsed().as_millis() as u64;
            let report = inst.report(timings.then_some(ms));
            if json {
                writeln!(out, "{}", serde_json::to_string(&report).expect("serializable")).map_err(io)?;
            } else {
                writeln!(out, "{report}").map_err(io)?;
                if let (Side::Zeta(l), Side::Zeta(r)) = (&inst.lhs, &inst.rhs) {
                    writeln!(out, "lhs: {}", l.render(12)).map_err(io)?;
                    writeln!(out, "rhs: {}", r.render(12)).map_err(io)?;
                }
            }
            if report.pass {
                Ok(EXIT_OK)
            } else {
                if !json {
                    write_table(out, &inst)?;
                }
                Ok(EXIT_FAIL)
            }
        }
        Command::Suite {
            weight_cap,
            json,
            jobs,
            timings,
            numeric,
        } => {
            let ev = numeric.evaluator()?;
            let cases = relations::suite_cases(weight_cap);
            let reports = relations::run_suite(&cases, &ev, jobs, timings)?;
            let failed = reports.iter().filter(|r| !r.pass).count();
            if json {
                let text = serde_json::to_string_pretty(&reports).expect("serializable");
                writeln!(out, "{text}").map_err(io)?;
            } else {
                for r in &reports {
                    writeln!(out, "{r}").map_err(io)?;
                }
                writeln!(out, "{} passed, {} failed", reports.len() - failed, failed).map_err(io)?;
            }
            Ok(if failed == 0 { EXIT_OK } else { EXIT_FAIL })
        }
        Command::List => {
            for name in relations::WORD_IDENTITIES {
                writeln!(out, "word {name}").map_err(io)?;
            }
            for name in relations::ZETA_IDENTITIES {
                writeln!(out, "zeta {name}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_table(out: &mut dyn Write, inst: &relations::IdentityInstance) -> Result<(), Error> {
    writeln!(out, "{:<24} {:>20} {:>20} {:>12}", "monomial", "lhs", "rhs", "diff").map_err(io)?;
    for row in inst.residual_table() {
        writeln!(
            out,
            "{:<24} {:>20} {:>20} {:>12.3e}",
            row.monomial, row.lhs, row.rhs, row.diff
        )
        .map_err(io)?;
    }
    Ok(())
}
