//! A parser and evaluator for the combinational subset emitted by
//! [`crate::hdl`]: module header, wire declarations, continuous assignments
//! with `~`, `&`, `^`, `|`, parentheses, bit selects and `1'b0`/`1'b1`
//! literals. Assignments are evaluated in text order, which the emitter
//! guarantees is definition-before-use; reading an unassigned signal is an
//! error rather than an `x`.

use std::collections::HashMap;

use crate::error::NetlistError;

/// A port or internal wire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signal {
    pub name: String,
    /// Declared range, `msb >= lsb`; scalars are `(0, 0)` with width 1.
    pub msb: usize,
    pub lsb: usize,
    pub scalar: bool,
}

impl Signal {
    pub fn width(&self) -> usize {
        self.msb - self.lsb + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Expr {
    Const(bool),
    Signal { name: String, index: Option<usize> },
    Not(Box<Expr>),
    Binary { op: Op, lhs: Box<Expr>, rhs: Box<Expr> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    And,
    Xor,
    Or,
}

#[derive(Clone, Debug)]
struct Assign {
    target: String,
    index: Option<usize>,
    expr: Expr,
    line: usize,
}

/// A parsed module ready for evaluation.
#[derive(Clone, Debug)]
pub struct Netlist {
    pub module_name: String,
    pub inputs: Vec<Signal>,
    pub outputs: Vec<Signal>,
    wires: Vec<Signal>,
    assigns: Vec<Assign>,
}

impl Netlist {
    pub fn parse(text: &str) -> Result<Self, NetlistError> {
        let mut module_name = None;
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut wires = Vec::new();
        let mut assigns = Vec::new();

        for (line_no, raw) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let line = match raw.find("//") {
                Some(at) => &raw[..at],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let err = |detail: &str| NetlistError::Parse { line: line_no, detail: detail.to_string() };

            if let Some(rest) = line.strip_prefix("module ") {
                let name_end = rest.find('(').ok_or_else(|| err("missing port list"))?;
                module_name = Some(rest[..name_end].trim().to_string());
            } else if line == "endmodule" {
                break;
            } else if let Some(rest) = line.strip_prefix("input wire") {
                inputs.push(parse_signal(rest, line_no)?);
            } else if let Some(rest) = line.strip_prefix("output wire") {
                outputs.push(parse_signal(rest, line_no)?);
            } else if let Some(rest) = line.strip_prefix("assign ") {
                assigns.push(parse_assign(rest, line_no)?);
            } else if let Some(rest) = line.strip_prefix("wire ") {
                match rest.split_once('=') {
                    Some((decl, expr)) => {
                        // `wire t1 = expr;` declares and assigns at once.
                        let sig = parse_signal(&format!("{};", decl.trim()), line_no)?;
                        let expr = parse_expr(expr.trim_end_matches(';').trim(), line_no)?;
                        assigns.push(Assign {
                            target: sig.name.clone(),
                            index: None,
                            expr,
                            line: line_no,
                        });
                        wires.push(sig);
                    }
                    None => wires.push(parse_signal(rest, line_no)?),
                }
            } else {
                return Err(err("unrecognized statement"));
            }
        }

        Ok(Netlist {
            module_name: module_name
                .ok_or(NetlistError::Parse { line: 1, detail: "no module header".to_string() })?,
            inputs,
            outputs,
            wires,
            assigns,
        })
    }

    fn signals(&self) -> impl Iterator<Item = &Signal> {
        self.inputs.iter().chain(&self.outputs).chain(&self.wires)
    }

    /// Evaluates the module. `inputs` maps each input port to its bits with
    /// index 0 holding bit `lsb`. Returns the output ports the same way.
    pub fn eval(
        &self,
        inputs: &HashMap<String, Vec<bool>>,
    ) -> Result<HashMap<String, Vec<bool>>, NetlistError> {
        let mut values: HashMap<String, Vec<Option<bool>>> = HashMap::new();
        for sig in self.signals() {
            values.insert(sig.name.clone(), vec![None; sig.width()]);
        }
        for sig in &self.inputs {
            let given = inputs
                .get(&sig.name)
                .ok_or_else(|| NetlistError::MissingInput { name: sig.name.clone() })?;
            if given.len() != sig.width() {
                return Err(NetlistError::InputWidth {
                    name: sig.name.clone(),
                    expected: sig.width(),
                    got: given.len(),
                });
            }
            let slots = values.get_mut(&sig.name).expect("just inserted");
            for (slot, &bit) in slots.iter_mut().zip(given) {
                *slot = Some(bit);
            }
        }

        let signal_table: HashMap<&str, &Signal> =
            self.signals().map(|s| (s.name.as_str(), s)).collect();

        for assign in &self.assigns {
            let value = eval_expr(&assign.expr, &values, &signal_table)?;
            let sig = signal_table
                .get(assign.target.as_str())
                .ok_or_else(|| NetlistError::UndeclaredSignal { name: assign.target.clone() })?;
            let slot_index = match assign.index {
                Some(idx) => {
                    if idx < sig.lsb || idx > sig.msb {
                        return Err(NetlistError::Parse {
                            line: assign.line,
                            detail: format!("index {idx} outside [{}:{}]", sig.msb, sig.lsb),
                        });
                    }
                    idx - sig.lsb
                }
                None => {
                    if !sig.scalar {
                        return Err(NetlistError::Parse {
                            line: assign.line,
                            detail: format!("vector {} assigned without an index", sig.name),
                        });
                    }
                    0
                }
            };
            let slots = values.get_mut(&assign.target).expect("declared above");
            if slots[slot_index].is_some() {
                return Err(NetlistError::DoubleAssign { name: assign.target.clone() });
            }
            slots[slot_index] = Some(value);
        }

        let mut out = HashMap::new();
        for sig in &self.outputs {
            let slots = &values[&sig.name];
            let bits: Result<Vec<bool>, _> = slots
                .iter()
                .map(|s| s.ok_or_else(|| NetlistError::UseBeforeAssign { name: sig.name.clone() }))
                .collect();
            out.insert(sig.name.clone(), bits?);
        }
        Ok(out)
    }
}

fn eval_expr(
    expr: &Expr,
    values: &HashMap<String, Vec<Option<bool>>>,
    signals: &HashMap<&str, &Signal>,
) -> Result<bool, NetlistError> {
    match expr {
        Expr::Const(b) => Ok(*b),
        Expr::Signal { name, index } => {
            let sig = signals
                .get(name.as_str())
                .ok_or_else(|| NetlistError::UndeclaredSignal { name: name.clone() })?;
            let slot = match index {
                Some(idx) => idx.checked_sub(sig.lsb).filter(|&i| i < sig.width()).ok_or_else(
                    || NetlistError::UseBeforeAssign { name: format!("{name}[{idx}]") },
                )?,
                None => 0,
            };
            values[name.as_str()][slot]
                .ok_or_else(|| NetlistError::UseBeforeAssign { name: name.clone() })
        }
        Expr::Not(inner) => Ok(!eval_expr(inner, values, signals)?),
        Expr::Binary { op, lhs, rhs } => {
            let l = eval_expr(lhs, values, signals)?;
            let r = eval_expr(rhs, values, signals)?;
            Ok(match op {
                Op::And => l & r,
                Op::Xor => l ^ r,
                Op::Or => l | r,
            })
        }
    }
}

/// Parses ` [23:1] c;` or ` uncorrectable;` (the leading keyword is gone).
fn parse_signal(rest: &str, line: usize) -> Result<Signal, NetlistError> {
    let err = |detail: String| NetlistError::Parse { line, detail };
    let rest = rest.trim().trim_end_matches(';').trim();
    if let Some(range_rest) = rest.strip_prefix('[') {
        let (range, name) = range_rest
            .split_once(']')
            .ok_or_else(|| err("unterminated range".to_string()))?;
        let (msb, lsb) = range
            .split_once(':')
            .ok_or_else(|| err("range needs msb:lsb".to_string()))?;
        let msb: usize = msb.trim().parse().map_err(|_| err(format!("bad msb {msb:?}")))?;
        let lsb: usize = lsb.trim().parse().map_err(|_| err(format!("bad lsb {lsb:?}")))?;
        if msb < lsb {
            return Err(err(format!("descending range [{msb}:{lsb}] required")));
        }
        Ok(Signal { name: parse_ident(name.trim(), line)?, msb, lsb, scalar: false })
    } else {
        Ok(Signal { name: parse_ident(rest, line)?, msb: 0, lsb: 0, scalar: true })
    }
}

fn parse_ident(s: &str, line: usize) -> Result<String, NetlistError> {
    let ok = !s.is_empty()
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(s.to_string())
    } else {
        Err(NetlistError::Parse { line, detail: format!("bad identifier {s:?}") })
    }
}

/// Parses `target = expr;` (the `assign ` keyword is gone).
fn parse_assign(rest: &str, line: usize) -> Result<Assign, NetlistError> {
    let err = |detail: &str| NetlistError::Parse { line, detail: detail.to_string() };
    let (target, expr) = rest.split_once('=').ok_or_else(|| err("assign needs '='"))?;
    let target = target.trim();
    let (name, index) = match target.split_once('[') {
        Some((name, idx)) => {
            let idx = idx.trim_end_matches(']').trim();
            let idx: usize =
                idx.parse().map_err(|_| err("bad bit index"))?;
            (name.trim(), Some(idx))
        }
        None => (target, None),
    };
    Ok(Assign {
        target: parse_ident(name, line)?,
        index,
        expr: parse_expr(expr.trim_end_matches(';').trim(), line)?,
        line,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Number(usize),
    Literal(bool),
    Tilde,
    Amp,
    Caret,
    Pipe,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Token>, NetlistError> {
    let err = |detail: String| NetlistError::Parse { line, detail };
    let mut tokens = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' => i += 1,
            '~' => {
                tokens.push(Token::Tilde);
                i += 1;
            }
            '&' => {
                tokens.push(Token::Amp);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '|' => {
                tokens.push(Token::Pipe);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '[' => {
                tokens.push(Token::LBracket);
                i += 1;
            }
            ']' => {
                tokens.push(Token::RBracket);
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // Width-1 binary literals: 1'b0 / 1'b1.
                if i < bytes.len() && bytes[i] == '\'' {
                    if bytes.get(i + 1) == Some(&'b') && i + 2 < bytes.len() {
                        let bit = bytes[i + 2];
                        tokens.push(Token::Literal(bit == '1'));
                        i += 3;
                    } else {
                        return Err(err("unsupported literal".to_string()));
                    }
                } else {
                    let num: String = bytes[start..i].iter().collect();
                    tokens.push(Token::Number(num.parse().map_err(|_| err("bad number".into()))?));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                tokens.push(Token::Ident(bytes[start..i].iter().collect()));
            }
            c => return Err(err(format!("unexpected character {c:?}"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn err(&self, detail: &str) -> NetlistError {
        NetlistError::Parse { line: self.line, detail: detail.to_string() }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // Verilog precedence among the operators we emit: ~ then & then ^ then |
    fn or_expr(&mut self) -> Result<Expr, NetlistError> {
        let mut lhs = self.xor_expr()?;
        while self.eat(&Token::Pipe) {
            let rhs = self.xor_expr()?;
            lhs = Expr::Binary { op: Op::Or, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn xor_expr(&mut self) -> Result<Expr, NetlistError> {
        let mut lhs = self.and_expr()?;
        while self.eat(&Token::Caret) {
            let rhs = self.and_expr()?;
            lhs = Expr::Binary { op: Op::Xor, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, NetlistError> {
        let mut lhs = self.unary_expr()?;
        while self.eat(&Token::Amp) {
            let rhs = self.unary_expr()?;
            lhs = Expr::Binary { op: Op::And, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> Result<Expr, NetlistError> {
        if self.eat(&Token::Tilde) {
            Ok(Expr::Not(Box::new(self.unary_expr()?)))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Expr, NetlistError> {
        match self.bump() {
            Some(Token::LParen) => {
                let inner = self.or_expr()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.err("missing ')'"));
                }
                Ok(inner)
            }
            Some(Token::Literal(b)) => Ok(Expr::Const(b)),
            Some(Token::Ident(name)) => {
                let index = if self.eat(&Token::LBracket) {
                    let Some(Token::Number(idx)) = self.bump() else {
                        return Err(self.err("bit select needs a number"));
                    };
                    if !self.eat(&Token::RBracket) {
                        return Err(self.err("missing ']'"));
                    }
                    Some(idx)
                } else {
                    None
                };
                Ok(Expr::Signal { name, index })
            }
            _ => Err(self.err("expected an operand")),
        }
    }
}

fn parse_expr(s: &str, line: usize) -> Result<Expr, NetlistError> {
    let tokens = tokenize(s, line)?;
    let mut parser = Parser { tokens, pos: 0, line };
    let expr = parser.or_expr()?;
    if parser.peek().is_some() {
        return Err(parser.err("trailing tokens in expression"));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "\
// toy module
module toy(a, b, y);
  input wire [2:1] a;
  input wire b;
  output wire [2:1] y;
  wire t1 = a[1] ^ a[2];
  assign y[1] = t1 & ~b;
  assign y[2] = (a[1] | b) ^ 1'b1;
endmodule
";

    fn eval_toy(a1: bool, a2: bool, b: bool) -> (bool, bool) {
        let netlist = Netlist::parse(TOY).unwrap();
        let inputs = HashMap::from([
            ("a".to_string(), vec![a1, a2]),
            ("b".to_string(), vec![b]),
        ]);
        let out = netlist.eval(&inputs).unwrap();
        (out["y"][0], out["y"][1])
    }

    #[test]
    fn parses_ports_and_widths() {
        let netlist = Netlist::parse(TOY).unwrap();
        assert_eq!(netlist.module_name, "toy");
        assert_eq!(netlist.inputs.len(), 2);
        assert_eq!(netlist.inputs[0].width(), 2);
        assert_eq!(netlist.inputs[1].width(), 1);
        assert_eq!(netlist.outputs[0].width(), 2);
    }

    #[test]
    fn evaluates_expressions() {
        // y1 = (a1 ^ a2) & ~b; y2 = ~(a1 | b)
        assert_eq!(eval_toy(true, false, false), (true, false));
        assert_eq!(eval_toy(true, true, false), (false, false));
        assert_eq!(eval_toy(false, false, true), (false, false));
        assert_eq!(eval_toy(false, false, false), (false, true));
    }

    #[test]
    fn precedence_binds_and_over_xor_over_or() {
        // a | b ^ c & d parses as a | (b ^ (c & d))
        let expr = parse_expr("a | b ^ c & d", 1).unwrap();
        match expr {
            Expr::Binary { op: Op::Or, .. } => {}
            other => panic!("or should be outermost, got {other:?}"),
        }
    }

    #[test]
    fn undeclared_signals_are_rejected() {
        let text = "\
module bad(a, y);
  input wire a;
  output wire y;
  assign y = a ^ ghost;
endmodule
";
        let netlist = Netlist::parse(text).unwrap();
        let inputs = HashMap::from([("a".to_string(), vec![true])]);
        assert!(matches!(
            netlist.eval(&inputs),
            Err(NetlistError::UndeclaredSignal { .. })
        ));
    }

    #[test]
    fn use_before_assign_is_rejected() {
        let text = "\
module bad(a, y);
  input wire a;
  output wire y;
  wire t2;
  assign y = t2;
  assign t2 = a;
endmodule
";
        let netlist = Netlist::parse(text).unwrap();
        let inputs = HashMap::from([("a".to_string(), vec![true])]);
        assert!(matches!(netlist.eval(&inputs), Err(NetlistError::UseBeforeAssign { .. })));
    }

    #[test]
    fn input_width_is_checked() {
        let netlist = Netlist::parse(TOY).unwrap();
        let inputs = HashMap::from([
            ("a".to_string(), vec![true]),
            ("b".to_string(), vec![false]),
        ]);
        assert!(matches!(netlist.eval(&inputs), Err(NetlistError::InputWidth { .. })));
    }
}
