//! Symbol specification language.
//!
//! A specification is either a preset name (`identity`, `xx-jump`, `xx-spin`,
//! `xy-f1`, `xy-f2`) or a list of `key=value` sections separated by `;`:
//!
//! ```text
//! factors=(0.5,z,-0.5),(0.5,1/z,-0.5);jumps=(0.5pi,0.25i);power=1;const=2
//! ```
//!
//! Numbers accept `pi`, `i`, implicit products (`0.5pi`, `0.2i`) and the
//! operators `+ - * /` with parentheses.

use std::fmt;

use fhchain::symbol::{Orientation, Symbol};
use fhchain::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub input: String,
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} at position {}", self.message, self.pos + 1)?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {}^", " ".repeat(self.pos))
    }
}

impl std::error::Error for ParseError {}

pub enum Spec {
    Preset(String),
    Generic(Symbol),
}

pub const PRESETS: [&str; 5] = ["identity", "xx-jump", "xx-spin", "xy-f1", "xy-f2"];

pub fn parse_spec(input: &str) -> Result<Spec, ParseError> {
    let trimmed = input.trim();
    if PRESETS.contains(&trimmed) {
        return Ok(Spec::Preset(trimmed.to_string()));
    }
    let mut p = Parser::new(input);
    p.symbol().map(Spec::Generic)
}

/// A single complex number, as used for command-line values.
pub fn parse_number(input: &str) -> Result<C64, ParseError> {
    let mut p = Parser::new(input);
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

pub fn parse_real(input: &str) -> Result<f64, ParseError> {
    let v = parse_number(input)?;
    if v.im != 0.0 {
        return Err(ParseError { input: input.to_string(), pos: 0, message: "expected a real number".into() });
    }
    Ok(v.re)
}

struct Parser {
    input: String,
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(input: &str) -> Self {
        Self { input: input.to_string(), chars: input.chars().collect(), pos: 0 }
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError { input: self.input.clone(), pos: self.pos.min(self.chars.len()), message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w: Vec<char> = word.chars().collect();
        if self.chars.len() >= self.pos + w.len() && self.chars[self.pos..self.pos + w.len()] == w[..] {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn symbol(&mut self) -> Result<Symbol, ParseError> {
        let mut sym = Symbol::identity();
        let mut constant = C64::new(1.0, 0.0);
        loop {
            self.skip_ws();
            if self.pos >= self.chars.len() {
                break;
            }
            let key_pos = self.pos;
            let key = self.ident();
            self.expect('=')?;
            match key.as_str() {
                "factors" => {
                    for t in self.tuples(3)? {
                        let [lambda, orient, p] = t.try_into().expect("arity checked");
                        let orientation = match orient {
                            Item::Orient(o) => o,
                            Item::Num(_, at) => {
                                self.pos = at;
                                return Err(self.error("factor orientation must be z or 1/z"));
                            }
                        };
                        sym = sym.with_factor(lambda.num(self)?, orientation, real(self, p.num(self)?)?);
                    }
                }
                "jumps" => {
                    for t in self.tuples(2)? {
                        let [x, lambda] = t.try_into().expect("arity checked");
                        sym = sym.with_jump(real(self, x.num(self)?)?, lambda.num(self)?);
                    }
                }
                "singularities" => {
                    for t in self.tuples(3)? {
                        let [x, a, b] = t.try_into().expect("arity checked");
                        sym = sym.with_singularity(real(self, x.num(self)?)?, real(self, a.num(self)?)?, b.num(self)?);
                    }
                }
                "power" => {
                    let v = self.expr()?;
                    let v = real(self, v)?;
                    if v.fract() != 0.0 || v.abs() > 1e6 {
                        return Err(self.error("power must be an integer"));
                    }
                    sym = sym.with_power(v as i32);
                }
                "const" => constant *= self.expr()?,
                _ => {
                    self.pos = key_pos;
                    return Err(self.error(&format!(
                        "unknown section '{key}'; expected a preset ({}) or factors, jumps, singularities, power, const",
                        PRESETS.join(", ")
                    )));
                }
            }
            self.skip_ws();
            if self.pos < self.chars.len() && !self.eat(';') {
                return Err(self.error("expected ';' between sections"));
            }
        }
        Ok(Symbol::constant(constant).multiply(&sym))
    }

    fn tuples(&mut self, arity: usize) -> Result<Vec<Vec<Item>>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.expect('(')?;
            let mut items = Vec::new();
            for i in 0..arity {
                if i > 0 {
                    self.expect(',')?;
                }
                items.push(self.item()?);
            }
            self.expect(')')?;
            out.push(items);
            if !self.eat(',') {
                break;
            }
        }
        Ok(out)
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        self.skip_ws();
        let save = self.pos;
        if self.keyword("1/z") {
            return Ok(Item::Orient(Orientation::InvZ));
        }
        self.pos = save;
        if self.keyword("z") && matches!(self.peek_nonws(), Some(',') | Some(')')) {
            return Ok(Item::Orient(Orientation::Z));
        }
        self.pos = save;
        Ok(Item::Num(self.expr()?, save))
    }

    fn peek_nonws(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek()
    }

    fn expr(&mut self) -> Result<C64, ParseError> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v += self.term()?;
            } else if self.eat('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<C64, ParseError> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v *= self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.norm() == 0.0 {
                    return Err(self.error("division by zero"));
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<C64, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let mut v = self.atom()?;
        // implicit products such as 0.5pi or 2i
        loop {
            let save = self.pos;
            if self.keyword("pi") {
                v *= std::f64::consts::PI;
            } else if self.peek() == Some('i') {
                self.pos += 1;
                v *= C64::new(0.0, 1.0);
            } else {
                self.pos = save;
                return Ok(v);
            }
        }
    }

    fn atom(&mut self) -> Result<C64, ParseError> {
        self.skip_ws();
        if self.eat('(') {
            let v = self.expr()?;
            self.expect(')')?;
            return Ok(v);
        }
        if self.keyword("pi") {
            return Ok(C64::new(std::f64::consts::PI, 0.0));
        }
        if self.peek() == Some('i') {
            self.pos += 1;
            return Ok(C64::new(0.0, 1.0));
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        if self.peek().is_some_and(|c| c == 'e' || c == 'E') {
            let save = self.pos;
            self.pos += 1;
            if self.peek().is_some_and(|c| c == '+' || c == '-') {
                self.pos += 1;
            }
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if text.is_empty() {
            return Err(self.error("expected a number"));
        }
        text.parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|_| {
            self.pos = start;
            self.error(&format!("malformed number '{text}'"))
        })
    }
}

#[derive(Debug)]
enum Item {
    Num(C64, usize),
    Orient(Orientation),
}

impl Item {
    fn num(self, p: &Parser) -> Result<C64, ParseError> {
        match self {
            Item::Num(v, _) => Ok(v),
            Item::Orient(_) => Err(p.error("expected a number, found an orientation")),
        }
    }
}

fn real(p: &Parser, v: C64) -> Result<f64, ParseError> {
    if v.im != 0.0 {
        Err(p.error("expected a real value"))
    } else {
        Ok(v.re)
    }
}
