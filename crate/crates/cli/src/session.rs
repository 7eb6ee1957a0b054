//! The command language shared by `repl`, `--script` files and the one-shot
//! subcommands.
//!
//! ```text
//! let h in D_2                       # canonical witness |t|^(1/2)
//! let x = 1 + 0.5·t^(1/2)            # Fermat literal, or an expression
//! algebra B = [[1,0],[0,1],[1,1]]
//! let (u,v) in B                     # generators of B
//! eval sqrt(1 + h)
//! deriv exp(x) wrt x at 0 order 3
//! compare 1+h strict 2
//! example dipole
//! format json
//! ```
//!
//! Commands are separated by newlines or `;`, and `#` starts a comment.

use std::collections::BTreeMap;
use std::sync::Arc;

use nilrad::expr::{parse, RealEnv, SmoothExpr};
use nilrad::json::to_json;
use nilrad::order::{strict_order, weak_order};
use nilrad::weil::{make_algebra, WeilAlgebra, WeilElement};
use nilrad::{derive_with, format_significant, lift_eval, lift_eval_weil, FermatEnv, FermatReal, WeilEnv};

use crate::error::CliError;
use crate::examples;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Real(FermatReal),
    Weil(WeilElement),
}

/// Result of one command: text to print, and whether it reports a failure.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Reply {
    pub text: String,
    pub failed: bool,
}

impl Reply {
    fn ok(text: impl Into<String>) -> Self {
        Reply { text: text.into(), failed: false }
    }
}

struct AlgebraEntry {
    algebra: WeilAlgebra,
    generator_names: Option<Vec<String>>,
}

pub struct Session {
    bindings: BTreeMap<String, Value>,
    algebras: BTreeMap<String, AlgebraEntry>,
    format: Format,
    seed: u64,
}

/// Splits a script into commands, tracking the 1-based line of each.
pub fn split_commands(script: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    for (i, line) in script.lines().enumerate() {
        let code = line.split('#').next().unwrap_or("");
        for cmd in code.split(';') {
            let cmd = cmd.trim();
            if !cmd.is_empty() {
                out.push((i + 1, cmd.to_string()));
            }
        }
    }
    out
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn syntax(column: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax { column, message: message.into() }
}

/// Byte offset of `part` inside `whole`; `part` must be a sub-slice of `whole`.
fn offset_in(whole: &str, part: &str) -> usize {
    part.as_ptr() as usize - whole.as_ptr() as usize
}

/// Finds a whitespace-delimited keyword; returns the text before and after it.
fn split_keyword<'a>(s: &'a str, keyword: &str) -> Option<(&'a str, &'a str)> {
    let mut search = 0;
    while let Some(found) = s[search..].find(keyword) {
        let at = search + found;
        let end = at + keyword.len();
        let before_ok = at == 0 || s[..at].ends_with(char::is_whitespace);
        let after_ok = end == s.len() || s[end..].starts_with(char::is_whitespace);
        if before_ok && after_ok {
            return Some((&s[..at], &s[end..]));
        }
        search = end;
    }
    None
}

impl Session {
    pub fn new(seed: u64) -> Self {
        Session { bindings: BTreeMap::new(), algebras: BTreeMap::new(), format: Format::Text, seed }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn set_format(&mut self, format: Format) {
        self.format = format;
    }

    pub fn binding(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    fn ensure_free(&self, name: &str, column: usize) -> Result<(), CliError> {
        if !is_identifier(name) {
            return Err(syntax(column, format!("`{name}` is not a valid name")));
        }
        if nilrad::expr::Func::from_name(name).is_some() {
            return Err(syntax(column, format!("`{name}` is a function name")));
        }
        if self.bindings.contains_key(name) || self.algebras.contains_key(name) {
            return Err(CliError::DuplicateName(name.to_string()));
        }
        Ok(())
    }

    /// Runs one command.
    pub fn execute(&mut self, cmd: &str) -> Result<Reply, CliError> {
        let cmd = cmd.trim();
        let (head, rest) = match cmd.find(char::is_whitespace) {
            Some(i) => (&cmd[..i], cmd[i..].trim_start()),
            None => (cmd, &cmd[cmd.len()..]),
        };
        let at = offset_in(cmd, rest);
        let result = match head {
            "let" => self.cmd_let(rest),
            "algebra" => self.cmd_algebra(rest),
            "eval" => self.cmd_eval(rest),
            "deriv" => self.cmd_deriv(rest),
            "compare" => self.cmd_compare(rest),
            "example" => self.cmd_example(rest),
            "format" => self.cmd_format(rest),
            "help" => return Ok(Reply::ok(HELP.trim_end())),
            "" => return Ok(Reply::default()),
            other => {
                return Err(syntax(0, format!("unknown command `{other}`; type `help` for the command list")));
            }
        };
        result.map_err(|e| e.offset_by(at))
    }

    /// Runs every command of a script, stopping at the first error.
    pub fn run_script(&mut self, script: &str) -> Result<Vec<Reply>, (usize, String, CliError)> {
        let mut replies = Vec::new();
        for (line, cmd) in split_commands(script) {
            match self.execute(&cmd) {
                Ok(reply) => replies.push(reply),
                Err(e) => return Err((line, cmd, e)),
            }
        }
        Ok(replies)
    }

    fn cmd_let(&mut self, decl: &str) -> Result<Reply, CliError> {
        if let Some(inner) = decl.strip_prefix('(') {
            let close = inner.find(')').ok_or_else(|| syntax(decl.len(), "expected `)`"))?;
            let names: Vec<&str> = inner[..close].split(',').map(str::trim).collect();
            let after = inner[close + 1..].trim_start();
            let target = after
                .strip_prefix("in")
                .filter(|t| t.starts_with(char::is_whitespace))
                .map(str::trim)
                .ok_or_else(|| syntax(offset_in(decl, after), "expected `in <algebra>`"))?;
            return self.bind_generators(&names, target, offset_in(decl, target));
        }
        if let Some((name, target)) = split_keyword(decl, "in") {
            let name = name.trim();
            let target = target.trim();
            self.ensure_free(name, 0)?;
            return self.bind_ideal_witness(name, target, offset_in(decl, target));
        }
        if let Some(eq) = decl.find('=') {
            let name = decl[..eq].trim();
            self.ensure_free(name, 0)?;
            let source = decl[eq + 1..].trim();
            let start = offset_in(decl, source);
            if source.is_empty() {
                return Err(syntax(decl.len(), "expected a value after `=`"));
            }
            let value = match source.parse::<FermatReal>() {
                Ok(x) => Value::Real(x),
                Err(_) => self.evaluate(source).map_err(|e| e.offset_by(start))?,
            };
            let text = self.render(&value)?;
            self.bindings.insert(name.to_string(), value);
            return Ok(Reply::ok(format!("{name} = {text}")));
        }
        Err(syntax(0, "expected `let NAME in D_k`, `let NAME = VALUE` or `let (NAMES) in ALGEBRA`"))
    }

    fn bind_ideal_witness(&mut self, name: &str, target: &str, at: usize) -> Result<Reply, CliError> {
        if self.algebras.contains_key(target) {
            return self.bind_generators(&[name], target, at);
        }
        let k = match target.strip_prefix('D') {
            Some("") => 1,
            Some(rest) => rest
                .strip_prefix('_')
                .and_then(|k| k.parse::<u32>().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| syntax(at, format!("expected `D` or `D_k` with k ≥ 1, found `{target}`")))?,
            None => return self.bind_generators(&[name], target, at),
        };
        let h = FermatReal::witness(k);
        let text = h.to_string();
        self.bindings.insert(name.to_string(), Value::Real(h));
        Ok(Reply::ok(format!("{name} = {text}")))
    }

    fn bind_generators(&mut self, names: &[&str], algebra_name: &str, at: usize) -> Result<Reply, CliError> {
        let entry = self
            .algebras
            .get(algebra_name)
            .ok_or_else(|| syntax(at, format!("unknown algebra `{algebra_name}`")))?;
        let algebra = Arc::clone(&entry.algebra);
        if names.len() != algebra.generators() {
            return Err(syntax(
                0,
                format!("algebra `{algebra_name}` has {} generators, got {} names", algebra.generators(), names.len()),
            ));
        }
        for (i, name) in names.iter().enumerate() {
            self.ensure_free(name, 0)?;
            if names[..i].contains(name) {
                return Err(CliError::DuplicateName(name.to_string()));
            }
        }
        for (j, name) in names.iter().enumerate() {
            let g = WeilElement::generator(&algebra, j)?;
            self.bindings.insert(name.to_string(), Value::Weil(g));
        }
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        self.algebras.get_mut(algebra_name).expect("checked above").generator_names = Some(owned);
        Ok(Reply::ok(format!(
            "({}) generate {algebra_name} (dimension {})",
            names.join(", "),
            algebra.dimension()
        )))
    }

    fn cmd_algebra(&mut self, decl: &str) -> Result<Reply, CliError> {
        let eq = decl.find('=').ok_or_else(|| syntax(decl.len(), "expected `algebra NAME = [[...], ...]`"))?;
        let name = decl[..eq].trim();
        self.ensure_free(name, 0)?;
        let source = decl[eq + 1..].trim();
        let start = offset_in(decl, source);
        let alphas: Vec<Vec<u32>> = serde_json::from_str(source)
            .map_err(|e| syntax(start + e.column().saturating_sub(1), format!("expected a list of multi-indices: {e}")))?;
        let algebra = make_algebra(alphas)?;
        let text = format!(
            "{name}: {} generators, dimension {}",
            algebra.generators(),
            algebra.dimension()
        );
        self.algebras.insert(name.to_string(), AlgebraEntry { algebra, generator_names: None });
        Ok(Reply::ok(text))
    }

    /// Evaluates an expression against the current bindings.
    pub fn evaluate(&self, source: &str) -> Result<Value, CliError> {
        let e = parse(source)?;
        self.evaluate_expr(&e)
    }

    fn evaluate_expr(&self, e: &SmoothExpr) -> Result<Value, CliError> {
        let vars = e.free_vars();
        for v in &vars {
            if !self.bindings.contains_key(v) {
                return Err(nilrad::Error::UnboundVariable(v.clone()).into());
            }
        }
        let algebra = vars.iter().find_map(|v| match &self.bindings[v] {
            Value::Weil(w) => Some(Arc::clone(w.algebra())),
            Value::Real(_) => None,
        });
        match algebra {
            None => {
                let env: FermatEnv = vars
                    .iter()
                    .map(|v| match &self.bindings[v] {
                        Value::Real(x) => (v.clone(), x.clone()),
                        Value::Weil(_) => unreachable!("no Weil bindings in use"),
                    })
                    .collect();
                Ok(Value::Real(lift_eval(e, &env)?))
            }
            Some(algebra) => {
                let mut env = WeilEnv::new();
                for v in &vars {
                    let w = match &self.bindings[v] {
                        Value::Weil(w) => w.clone(),
                        Value::Real(x) if x.is_real() => WeilElement::constant(&algebra, x.standard_part()),
                        Value::Real(x) => {
                            return Err(CliError::Usage(format!(
                                "`{v}` = {x} is a Fermat infinitesimal and cannot be combined with Weil-algebra elements"
                            )))
                        }
                    };
                    env.insert(v.clone(), w);
                }
                Ok(Value::Weil(lift_eval_weil(e, &algebra, &env)?))
            }
        }
    }

    fn generator_names(&self, algebra: &WeilAlgebra) -> Vec<String> {
        self.algebras
            .values()
            .find(|entry| Arc::ptr_eq(&entry.algebra, algebra))
            .and_then(|entry| entry.generator_names.clone())
            .unwrap_or_else(|| (1..=algebra.generators()).map(|j| format!("x{j}")).collect())
    }

    /// Renders a value in the current output format.
    pub fn render(&self, value: &Value) -> Result<String, CliError> {
        Ok(match (self.format, value) {
            (Format::Text, Value::Real(x)) => x.to_string(),
            (Format::Text, Value::Weil(w)) => w.render(&self.generator_names(w.algebra())),
            (Format::Json, Value::Real(x)) => to_json(x)?,
            (Format::Json, Value::Weil(w)) => to_json(w)?,
        })
    }

    fn cmd_eval(&mut self, source: &str) -> Result<Reply, CliError> {
        if source.is_empty() {
            return Err(syntax(0, "expected an expression after `eval`"));
        }
        let value = self.evaluate(source)?;
        Ok(Reply::ok(self.render(&value)?))
    }

    fn cmd_deriv(&mut self, args: &str) -> Result<Reply, CliError> {
        let (args, derivatives) = match args.trim_end().strip_suffix("derivatives") {
            Some(rest) if rest.ends_with(char::is_whitespace) => (rest.trim_end(), true),
            _ => (args, false),
        };
        let usage = "expected `deriv EXPR [wrt VAR] at X0 order K [derivatives]`";
        let (head, order) = split_keyword(args, "order").ok_or_else(|| syntax(args.len(), usage))?;
        let order_text = order.trim();
        let k = order_text
            .parse::<u32>()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| syntax(offset_in(args, order_text), format!("expected an order ≥ 1, found `{order_text}`")))?;
        let (head, x0) = split_keyword(head, "at").ok_or_else(|| syntax(head.len(), usage))?;
        let x0_text = x0.trim();
        let x0 = x0_text
            .parse::<f64>()
            .map_err(|_| syntax(offset_in(args, x0_text), format!("expected a real base point, found `{x0_text}`")))?;
        let (expr_text, var) = match split_keyword(head, "wrt") {
            Some((e, v)) => (e.trim(), Some(v.trim())),
            None => (head.trim(), None),
        };
        self.derive_report(expr_text, var, x0, k, derivatives)
            .map_err(|err| err.offset_by(offset_in(args, expr_text)))
    }

    /// Taylor jet of `source` in `var` (or its single unbound variable) at `x0`.
    pub fn derive_report(
        &self,
        source: &str,
        var: Option<&str>,
        x0: f64,
        k: u32,
        derivatives: bool,
    ) -> Result<Reply, CliError> {
        let e = &parse(source)?;
        let var = match var {
            Some(v) => v.to_string(),
            None => {
                let free: Vec<String> = e.free_vars().into_iter().filter(|v| !self.bindings.contains_key(v)).collect();
                match free.as_slice() {
                    [v] => v.clone(),
                    [] => "x".to_string(),
                    _ => {
                        return Err(CliError::Usage(format!(
                            "several unbound variables ({}); name one with `wrt`",
                            free.join(", ")
                        )))
                    }
                }
            }
        };
        let mut env = RealEnv::new();
        for v in e.free_vars() {
            if v == var {
                continue;
            }
            match self.bindings.get(&v) {
                Some(Value::Real(x)) if x.is_real() => {
                    env.insert(v, x.standard_part());
                }
                Some(_) => {
                    return Err(CliError::Usage(format!("`{v}` must be bound to a standard real to differentiate")));
                }
                None => return Err(nilrad::Error::UnboundVariable(v).into()),
            }
        }
        let jet = derive_with(e, &var, x0, k, &env)?;
        if self.format == Format::Json {
            return Ok(Reply::ok(to_json(&jet)?));
        }
        let mut lines = vec![format!("jet of {source} in {var} at {}, order {k}", format_significant(x0, 6))];
        for (i, c) in jet.coefficients().iter().enumerate() {
            lines.push(format!("c{i} = {}", format_significant(*c, 6)));
        }
        if derivatives {
            for (i, d) in jet.derivatives().iter().enumerate() {
                lines.push(format!("f^({i}) = {}", format_significant(*d, 6)));
            }
        }
        Ok(Reply::ok(lines.join("\n")))
    }

    fn cmd_compare(&mut self, args: &str) -> Result<Reply, CliError> {
        for relation in ["eq", "weak", "strict", "iso"] {
            if let Some((lhs, rhs)) = split_keyword(args, relation) {
                let (lhs, rhs) = (lhs.trim(), rhs.trim());
                let x = self.evaluate_real(lhs).map_err(|e| e.offset_by(offset_in(args, lhs)))?;
                let y = self.evaluate_real(rhs).map_err(|e| e.offset_by(offset_in(args, rhs)))?;
                return Ok(Reply::ok(compare(&x, relation, &y)));
            }
        }
        Err(syntax(0, "expected `compare LHS eq|weak|strict|iso RHS`"))
    }

    fn evaluate_real(&self, source: &str) -> Result<FermatReal, CliError> {
        if source.is_empty() {
            return Err(syntax(0, "expected an expression"));
        }
        match self.evaluate(source)? {
            Value::Real(x) => Ok(x),
            Value::Weil(_) => Err(CliError::Usage("comparisons are defined on Fermat reals only".into())),
        }
    }

    fn cmd_example(&mut self, name: &str) -> Result<Reply, CliError> {
        let report = examples::run(name, self.seed)?;
        Ok(Reply { text: report.to_string(), failed: !report.passed() })
    }

    fn cmd_format(&mut self, arg: &str) -> Result<Reply, CliError> {
        self.format = match arg {
            "json" => Format::Json,
            "text" => Format::Text,
            other => return Err(syntax(0, format!("expected `json` or `text`, found `{other}`"))),
        };
        Ok(Reply::default())
    }
}

/// The verdict printed by `compare`.
pub fn compare(x: &FermatReal, relation: &str, y: &FermatReal) -> String {
    match relation {
        "eq" => if x == y { "equal" } else { "not-equal" }.to_string(),
        "weak" => weak_order(x, y).to_string(),
        "strict" => strict_order(x, y).to_string(),
        _ => {
            let (a, b) = (x.standard_part(), y.standard_part());
            let (sa, sb) = (format_significant(a, 6), format_significant(b, 6));
            let order = weak_order(x, y);
            if a == b {
                format!("{order}; similar (st {sa} = {sb})")
            } else {
                format!("{order}; not-similar (st {sa} ≠ {sb})")
            }
        }
    }
}

pub const HELP: &str = "\
commands (separate with newlines or `;`, `#` starts a comment):
  let NAME in D_k            bind the witness |t|^(1/k) of D_k (`D` means D_1)
  let NAME = VALUE           bind a Fermat literal such as `1 + 0.5·t^(1/2)` or an expression
  algebra NAME = [[..],..]   declare the Weil algebra of the given multi-indices
  let (N1,..,Nn) in ALGEBRA  bind the generators of a declared algebra
  eval EXPR                  evaluate with the current bindings
  deriv EXPR [wrt VAR] at X0 order K [derivatives]
                             Taylor coefficients c0..cK (and i!·ci with `derivatives`)
  compare LHS REL RHS        REL is eq, weak, strict or iso
  example NAME               run a worked example: dipole, curvature, schwarz,
                             ode-roots, newtonian-limit, diff-under-integral
  format json|text           choose the output format
  help                       show this list
";
