//! Parser for the s-expression rule and fact syntax.
//!
//! Accepted forms, one or more per stream:
//!
//! ```text
//! rule     := "(" id "(" "if" lhs ")" "(" "then" "(" "infer" pattern "with" interval ")" ")" clause* ")"
//! clause   := "(" "corr" number ")" | "(" "source" symbol ")"
//! lhs      := pattern | "(" "not" lhs ")" | "(" "and" lhs lhs+ ")" | "(" "or" lhs lhs+ ")"
//! fact     := "(" "fact" "(" predicate constant* ")" interval ")"
//! pattern  := "(" predicate term* ")"
//! interval := "(" number number ")"
//! ```
//!
//! Symbols are case-sensitive tokens over letters, digits, `-` and `_`;
//! match variables are `?`-prefixed symbols. Numbers accept `0.5` and `.5`
//! forms. `;` starts a comment running to end of line. The words `and`,
//! `or`, `not` and `fact` are reserved and cannot name predicates or rules.

use std::fmt;

use thiserror::Error;

use crate::ast::{Atom, FactDecl, LhsExpr, Pattern, Rule, Term};
use crate::interval::{Correlation, Interval};

const MAX_DEPTH: usize = 512;
const RESERVED: [&str; 4] = ["and", "or", "not", "fact"];

/// A parse failure with its source position and, when known, the rule
/// being parsed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub rule: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.message)?;
        if let Some(rule) = &self.rule {
            write!(f, " (in rule {rule})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line: pos.line,
        col: pos.col,
        rule: None,
        message: message.into(),
    })
}

fn in_rule(mut e: ParseError, id: &str) -> ParseError {
    if e.rule.is_none() {
        e.rule = Some(id.to_string());
    }
    e
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    LParen,
    RParen,
    Symbol(String),
    Variable(String),
    Number(f64),
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    kind: TokenKind,
    pos: Pos,
}

fn is_symbol_char(c: char) -> bool {
    c.is_alphanumeric() || c == '-' || c == '_'
}

fn is_number_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '+'
}

struct Scanner {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Scanner {
    fn new(text: &str) -> Self {
        Scanner {
            chars: text.chars().collect(),
            i: 0,
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn peek_next(&self) -> Option<char> {
        self.chars.get(self.i + 1).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut scanner = Scanner::new(text);
    let mut tokens = Vec::new();
    while let Some(c) = scanner.peek() {
        let pos = scanner.pos();
        if c.is_whitespace() {
            scanner.bump();
        } else if c == ';' {
            scanner.take_while(|c| c != '\n');
        } else if c == '(' {
            scanner.bump();
            tokens.push(Token { kind: TokenKind::LParen, pos });
        } else if c == ')' {
            scanner.bump();
            tokens.push(Token { kind: TokenKind::RParen, pos });
        } else if c == '?' {
            scanner.bump();
            let name = scanner.take_while(is_symbol_char);
            if name.is_empty() {
                return err(pos, "expected a variable name after '?'");
            }
            tokens.push(Token { kind: TokenKind::Variable(name), pos });
        } else if c.is_ascii_digit()
            || c == '.'
            || (c == '-' && matches!(scanner.peek_next(), Some(n) if n.is_ascii_digit() || n == '.'))
        {
            let text = scanner.take_while(is_number_char);
            let value: f64 = text
                .parse()
                .map_err(|_| ParseError {
                    line: pos.line,
                    col: pos.col,
                    rule: None,
                    message: format!("malformed number `{text}`"),
                })?;
            if !value.is_finite() {
                return err(pos, format!("malformed number `{text}`"));
            }
            tokens.push(Token { kind: TokenKind::Number(value), pos });
        } else if is_symbol_char(c) {
            let name = scanner.take_while(is_symbol_char);
            tokens.push(Token { kind: TokenKind::Symbol(name), pos });
        } else {
            return err(pos, format!("unexpected character `{c}`"));
        }
    }
    Ok(tokens)
}

// ---------------------------------------------------------------------------
// S-expression reading

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Symbol(String, Pos),
    Variable(String, Pos),
    Number(f64, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Symbol(_, p) | Sexp::Variable(_, p) | Sexp::Number(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn read_sexps(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let tokens = lex(text)?;
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let (sexp, next) = read_one(&tokens, i, 0)?;
        out.push(sexp);
        i = next;
    }
    Ok(out)
}

fn read_one(tokens: &[Token], i: usize, depth: usize) -> Result<(Sexp, usize), ParseError> {
    let token = &tokens[i];
    if depth > MAX_DEPTH {
        return err(token.pos, "expression nested too deeply");
    }
    match &token.kind {
        TokenKind::LParen => {
            let mut items = Vec::new();
            let mut j = i + 1;
            loop {
                match tokens.get(j) {
                    None => return err(token.pos, "unclosed `(`"),
                    Some(t) if t.kind == TokenKind::RParen => {
                        return Ok((Sexp::List(items, token.pos), j + 1));
                    }
                    Some(_) => {
                        let (child, next) = read_one(tokens, j, depth + 1)?;
                        items.push(child);
                        j = next;
                    }
                }
            }
        }
        TokenKind::RParen => err(token.pos, "unexpected `)`"),
        TokenKind::Symbol(s) => Ok((Sexp::Symbol(s.clone(), token.pos), i + 1)),
        TokenKind::Variable(v) => Ok((Sexp::Variable(v.clone(), token.pos), i + 1)),
        TokenKind::Number(n) => Ok((Sexp::Number(*n, token.pos), i + 1)),
    }
}

// ---------------------------------------------------------------------------
// Shaping

fn expect_symbol<'a>(sexp: &'a Sexp, what: &str) -> Result<&'a str, ParseError> {
    match sexp {
        Sexp::Symbol(s, _) => Ok(s),
        other => err(other.pos(), format!("expected {what}")),
    }
}

fn expect_list<'a>(sexp: &'a Sexp, what: &str) -> Result<&'a [Sexp], ParseError> {
    match sexp {
        Sexp::List(items, _) => Ok(items),
        other => err(other.pos(), format!("expected {what}")),
    }
}

fn expect_number(sexp: &Sexp, what: &str) -> Result<f64, ParseError> {
    match sexp {
        Sexp::Number(n, _) => Ok(*n),
        other => err(other.pos(), format!("expected {what}")),
    }
}

fn interval_from_sexp(sexp: &Sexp) -> Result<Interval, ParseError> {
    let items = expect_list(sexp, "an interval `(lower upper)`")?;
    if items.len() != 2 {
        return err(sexp.pos(), "an interval takes exactly two numbers");
    }
    let lower = expect_number(&items[0], "a number for the interval's lower bound")?;
    let upper = expect_number(&items[1], "a number for the interval's upper bound")?;
    Interval::try_new(lower, upper).map_err(|e| ParseError {
        line: sexp.pos().line,
        col: sexp.pos().col,
        rule: None,
        message: e.to_string(),
    })
}

fn pattern_from_sexp(sexp: &Sexp) -> Result<Pattern, ParseError> {
    let items = expect_list(sexp, "a pattern `(predicate args...)`")?;
    let Some((head, rest)) = items.split_first() else {
        return err(sexp.pos(), "a pattern needs a predicate symbol");
    };
    let predicate = expect_symbol(head, "a predicate symbol")?;
    if RESERVED.contains(&predicate) {
        return err(head.pos(), format!("`{predicate}` is reserved and cannot be a predicate"));
    }
    let mut args = Vec::with_capacity(rest.len());
    for arg in rest {
        match arg {
            Sexp::Symbol(s, _) => args.push(Term::Constant(s.clone())),
            Sexp::Variable(v, _) => args.push(Term::Variable(v.clone())),
            other => return err(other.pos(), "expected a constant symbol or a `?variable`"),
        }
    }
    Ok(Pattern {
        predicate: predicate.to_string(),
        args,
    })
}

fn lhs_from_sexp(sexp: &Sexp) -> Result<LhsExpr, ParseError> {
    let items = expect_list(sexp, "a condition")?;
    let head = match items.first() {
        Some(Sexp::Symbol(s, _)) => s.as_str(),
        _ => return pattern_from_sexp(sexp).map(LhsExpr::Cond),
    };
    match head {
        "not" => {
            if items.len() != 2 {
                return err(sexp.pos(), "`not` takes exactly one expression");
            }
            Ok(LhsExpr::Not(Box::new(lhs_from_sexp(&items[1])?)))
        }
        "and" | "or" => {
            if items.len() < 3 {
                return err(sexp.pos(), format!("`{head}` takes at least two expressions"));
            }
            let children = items[1..]
                .iter()
                .map(lhs_from_sexp)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(if head == "and" {
                LhsExpr::And(children)
            } else {
                LhsExpr::Or(children)
            })
        }
        _ => pattern_from_sexp(sexp).map(LhsExpr::Cond),
    }
}

fn rule_from_sexp(sexp: &Sexp) -> Result<Rule, ParseError> {
    let items = expect_list(sexp, "a rule")?;
    if items.len() < 3 {
        return err(sexp.pos(), "a rule needs an id, an `(if ...)` part and a `(then ...)` part");
    }
    let id = expect_symbol(&items[0], "a rule id symbol")?.to_string();
    if RESERVED.contains(&id.as_str()) {
        return err(items[0].pos(), format!("`{id}` is reserved and cannot be a rule id"));
    }
    let build = || -> Result<Rule, ParseError> {
        let if_part = expect_list(&items[1], "the `(if ...)` part")?;
        if if_part.len() != 2 || expect_symbol(&if_part[0], "`if`")? != "if" {
            return err(items[1].pos(), "the `(if ...)` part takes exactly one expression");
        }
        let lhs = lhs_from_sexp(&if_part[1])?;

        let then_part = expect_list(&items[2], "the `(then ...)` part")?;
        if then_part.len() != 2 || expect_symbol(&then_part[0], "`then`")? != "then" {
            return err(items[2].pos(), "the `(then ...)` part takes exactly one `(infer ...)` form");
        }
        let infer = expect_list(&then_part[1], "an `(infer <pattern> with <interval>)` form")?;
        if infer.len() != 4
            || expect_symbol(&infer[0], "`infer`")? != "infer"
            || expect_symbol(&infer[2], "`with`")? != "with"
        {
            return err(
                then_part[1].pos(),
                "expected `(infer <pattern> with <interval>)`",
            );
        }
        let conclusion = pattern_from_sexp(&infer[1])?;
        let strength = interval_from_sexp(&infer[3])?;

        let mut corr = Correlation::default();
        let mut source: Option<String> = None;
        let mut seen_corr = false;
        for clause in &items[3..] {
            let parts = expect_list(clause, "a `(corr ...)` or `(source ...)` clause")?;
            let head = parts
                .first()
                .map(|h| expect_symbol(h, "`corr` or `source`"))
                .transpose()?
                .unwrap_or("");
            match head {
                "corr" => {
                    if seen_corr {
                        return err(clause.pos(), "duplicate `(corr ...)` clause");
                    }
                    if parts.len() != 2 {
                        return err(clause.pos(), "`corr` takes exactly one number");
                    }
                    let value = expect_number(&parts[1], "a correlation in [-1, 1]")?;
                    corr = Correlation::try_new(value).map_err(|e| ParseError {
                        line: parts[1].pos().line,
                        col: parts[1].pos().col,
                        rule: None,
                        message: e.to_string(),
                    })?;
                    seen_corr = true;
                }
                "source" => {
                    if source.is_some() {
                        return err(clause.pos(), "duplicate `(source ...)` clause");
                    }
                    if parts.len() != 2 {
                        return err(clause.pos(), "`source` takes exactly one symbol");
                    }
                    source = Some(expect_symbol(&parts[1], "a source symbol")?.to_string());
                }
                _ => return err(clause.pos(), "expected a `(corr ...)` or `(source ...)` clause"),
            }
        }

        let rule = Rule {
            source: source.unwrap_or_else(|| id.clone()),
            id: id.clone(),
            lhs,
            conclusion,
            strength,
            corr,
        };
        // Range restriction: conclusion variables must occur in the lhs.
        let lhs_vars = rule.lhs.variables();
        for var in rule.conclusion.variables() {
            if !lhs_vars.contains(var) {
                return err(
                    infer[1].pos(),
                    format!("conclusion variable ?{var} does not occur in the left-hand side"),
                );
            }
        }
        Ok(rule)
    };
    build().map_err(|e| in_rule(e, &id))
}

fn fact_from_sexp(sexp: &Sexp) -> Result<FactDecl, ParseError> {
    let items = expect_list(sexp, "a fact")?;
    if items.len() != 3 || expect_symbol(&items[0], "`fact`")? != "fact" {
        return err(sexp.pos(), "expected `(fact (<predicate> <args...>) (<lower> <upper>))`");
    }
    let atom_items = expect_list(&items[1], "a ground atom")?;
    let Some((head, rest)) = atom_items.split_first() else {
        return err(items[1].pos(), "a fact atom needs a predicate symbol");
    };
    let predicate = expect_symbol(head, "a predicate symbol")?;
    if RESERVED.contains(&predicate) {
        return err(head.pos(), format!("`{predicate}` is reserved and cannot be a predicate"));
    }
    let mut args = Vec::with_capacity(rest.len());
    for arg in rest {
        match arg {
            Sexp::Symbol(s, _) => args.push(s.clone()),
            Sexp::Variable(v, _) => {
                return err(arg.pos(), format!("facts must be ground; found variable ?{v}"));
            }
            other => return err(other.pos(), "expected a constant symbol"),
        }
    }
    let belief = interval_from_sexp(&items[2])?;
    Ok(FactDecl {
        atom: Atom {
            predicate: predicate.to_string(),
            args,
        },
        belief,
    })
}

fn is_fact_form(sexp: &Sexp) -> bool {
    matches!(sexp, Sexp::List(items, _)
        if matches!(items.first(), Some(Sexp::Symbol(s, _)) if s == "fact"))
}

fn check_duplicate_rule(rules: &[Rule], rule: &Rule, pos: Pos) -> Result<(), ParseError> {
    if rules.iter().any(|r| r.id == rule.id) {
        return err(pos, format!("duplicate rule id `{}`", rule.id));
    }
    Ok(())
}

fn check_duplicate_fact(facts: &[FactDecl], fact: &FactDecl, pos: Pos) -> Result<(), ParseError> {
    if facts.iter().any(|f| f.atom == fact.atom) {
        return err(pos, format!("duplicate fact for atom {}", fact.atom));
    }
    Ok(())
}

/// Parses a stream of rule forms, in stream order. Rejects duplicate rule
/// ids and fact declarations.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, ParseError> {
    let mut rules = Vec::new();
    for sexp in read_sexps(text)? {
        if is_fact_form(&sexp) {
            return err(sexp.pos(), "expected a rule, found a fact declaration");
        }
        let rule = rule_from_sexp(&sexp)?;
        check_duplicate_rule(&rules, &rule, sexp.pos())?;
        rules.push(rule);
    }
    Ok(rules)
}

/// Parses a stream of fact forms, in stream order. Rejects duplicate atoms
/// and rule declarations.
pub fn parse_facts(text: &str) -> Result<Vec<FactDecl>, ParseError> {
    let mut facts = Vec::new();
    for sexp in read_sexps(text)? {
        if !is_fact_form(&sexp) {
            return err(sexp.pos(), "expected a `(fact ...)` declaration");
        }
        let fact = fact_from_sexp(&sexp)?;
        check_duplicate_fact(&facts, &fact, sexp.pos())?;
        facts.push(fact);
    }
    Ok(facts)
}

/// Parses a stream mixing rule and fact forms; each keeps stream order
/// within its kind.
pub fn parse_mixed(text: &str) -> Result<(Vec<Rule>, Vec<FactDecl>), ParseError> {
    let mut rules = Vec::new();
    let mut facts = Vec::new();
    for sexp in read_sexps(text)? {
        if is_fact_form(&sexp) {
            let fact = fact_from_sexp(&sexp)?;
            check_duplicate_fact(&facts, &fact, sexp.pos())?;
            facts.push(fact);
        } else {
            let rule = rule_from_sexp(&sexp)?;
            check_duplicate_rule(&rules, &rule, sexp.pos())?;
            rules.push(rule);
        }
    }
    Ok((rules, facts))
}

/// Parses a single pattern literal such as `(rain)` or `(strong ?x)`.
pub fn parse_pattern(text: &str) -> Result<Pattern, ParseError> {
    let sexps = read_sexps(text)?;
    match sexps.as_slice() {
        [single] => pattern_from_sexp(single),
        _ => err(Pos { line: 1, col: 1 }, "expected exactly one pattern"),
    }
}

/// Parses a single interval literal such as `(0.4 0.9)`.
pub fn parse_interval(text: &str) -> Result<Interval, ParseError> {
    let sexps = read_sexps(text)?;
    match sexps.as_slice() {
        [single] => interval_from_sexp(single),
        _ => err(Pos { line: 1, col: 1 }, "expected exactly one interval"),
    }
}
