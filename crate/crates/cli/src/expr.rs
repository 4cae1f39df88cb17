//! Symbol expressions for the numerical commands.
//!
//! Plain polynomials go through the exact parser so that they keep their
//! rational coefficients. Anything else is parsed here into a small tree and
//! evaluated in `f64`:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | q | p | h | pi | name '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Built-ins: `cos`, `sin`, `exp`, `gauss_damped(a)` and `gauss_damped(a, s)`
//! for `a·exp(-(q²+p²)/(2s²))` with `s = 1` by default, and `coswave(q0, p0)`
//! for `cos((p0·q - q0·p)/h)`.

use opcalc::gridrep::{SampledSymbol, SymbolClass};
use opcalc::quantrules::ClassicalPolynomial;
use opcalc::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    Q,
    P,
    Hbar,
    Neg(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Func {
    Cos,
    Sin,
    Exp,
    GaussDamped,
    CosWave,
}

impl Func {
    fn lookup(name: &str) -> Option<(Self, usize, usize)> {
        Some(match name {
            "cos" => (Func::Cos, 1, 1),
            "sin" => (Func::Sin, 1, 1),
            "exp" => (Func::Exp, 1, 1),
            "gauss_damped" => (Func::GaussDamped, 1, 2),
            "coswave" => (Func::CosWave, 2, 2),
            _ => return None,
        })
    }
}

impl Node {
    fn eval(&self, q: f64, p: f64, hbar: f64) -> f64 {
        match self {
            Node::Num(x) => *x,
            Node::Q => q,
            Node::P => p,
            Node::Hbar => hbar,
            Node::Neg(a) => -a.eval(q, p, hbar),
            Node::Bin(op, a, b) => {
                let (x, y) = (a.eval(q, p, hbar), b.eval(q, p, hbar));
                match op {
                    Op::Add => x + y,
                    Op::Sub => x - y,
                    Op::Mul => x * y,
                    Op::Div => x / y,
                    Op::Pow if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 => x.powi(y as i32),
                    Op::Pow => x.powf(y),
                }
            }
            Node::Call(f, args) => {
                let v: Vec<f64> = args.iter().map(|a| a.eval(q, p, hbar)).collect();
                match f {
                    Func::Cos => v[0].cos(),
                    Func::Sin => v[0].sin(),
                    Func::Exp => v[0].exp(),
                    Func::GaussDamped => {
                        let s = v.get(1).copied().unwrap_or(1.0);
                        v[0] * (-(q * q + p * p) / (2.0 * s * s)).exp()
                    }
                    Func::CosWave => ((v[1] * q - v[0] * p) / hbar).cos(),
                }
            }
        }
    }

    fn class(&self) -> SymbolClass {
        match self {
            Node::Call(Func::GaussDamped, _) => SymbolClass::Decaying,
            Node::Call(Func::CosWave, _) => SymbolClass::Periodic,
            _ => SymbolClass::Polynomial,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some('+') => Op::Add,
                Some('-') => Op::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    Op::Mul
                }
                Some('/') => {
                    self.pos += 1;
                    Op::Div
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' || c == '.' => Op::Mul,
                _ => return Ok(lhs),
            };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Node::Bin(Op::Pow, Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let start = match self.peek() {
            None => return self.err(self.pos, "unexpected end of expression"),
            Some(_) => self.pos,
        };
        let rest = &self.src[start..];
        if self.eat('(') {
            let inner = self.expr()?;
            if !self.eat(')') {
                return self.err(self.pos, "expected ')'");
            }
            return Ok(inner);
        }
        let c = rest.chars().next().unwrap_or(' ');
        if c.is_ascii_digit() || c == '.' {
            let len = number_len(rest);
            let text = &rest[..len];
            self.pos += len;
            return text
                .parse()
                .map(Node::Num)
                .or_else(|_| self.err(start, format!("malformed number '{text}'")));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
            let name = &rest[..len];
            self.pos += len;
            return match name {
                "q" => Ok(Node::Q),
                "p" => Ok(Node::P),
                "h" | "hbar" => Ok(Node::Hbar),
                "pi" => Ok(Node::Num(std::f64::consts::PI)),
                _ => self.call(start, name),
            };
        }
        self.err(start, format!("unexpected character '{c}'"))
    }

    fn call(&mut self, start: usize, name: &str) -> Result<Node> {
        let Some((func, min, max)) = Func::lookup(name) else {
            return self.err(start, format!("unknown name '{name}'"));
        };
        if !self.eat('(') {
            return self.err(self.pos, format!("expected '(' after {name}"));
        }
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        if !self.eat(')') {
            return self.err(self.pos, "expected ')' or ','");
        }
        if args.len() < min || args.len() > max {
            let want = if min == max { min.to_string() } else { format!("{min} or {max}") };
            return self.err(start, format!("{name} takes {want} arguments, got {}", args.len()));
        }
        Ok(Node::Call(func, args))
    }
}

fn number_len(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
        i += 1;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

fn parse_tree(input: &str) -> Result<Node> {
    let mut parser = Parser { src: input, pos: 0 };
    let node = parser.expr()?;
    if parser.peek().is_some() {
        return parser.err(parser.pos, "unexpected trailing input");
    }
    Ok(node)
}

/// A parsed symbol: the exact polynomial when the expression is one, and
/// the sampled form used by the grid pipelines.
#[derive(Clone, Debug)]
pub struct Symbol {
    pub text: String,
    pub polynomial: Option<ClassicalPolynomial>,
    pub sampled: SampledSymbol,
}

impl Symbol {
    pub fn parse(input: &str, hbar: f64) -> Result<Self> {
        if let Ok(poly) = ClassicalPolynomial::parse(input) {
            let sampled = SampledSymbol::from_polynomial(&poly, hbar);
            return Ok(Self { text: input.to_string(), polynomial: Some(poly), sampled });
        }
        let tree = parse_tree(input)?;
        let class = tree.class();
        let sampled = SampledSymbol::real(class, move |q, p| tree.eval(q, p, hbar));
        Ok(Self { text: input.to_string(), polynomial: None, sampled })
    }

    pub fn require_polynomial(&self) -> Result<&ClassicalPolynomial> {
        self.polynomial
            .as_ref()
            .ok_or_else(|| Error::Invalid(format!("'{}' is not a polynomial in q and p", self.text)))
    }
}
