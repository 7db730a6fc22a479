//! Reader and printer for `.hg` hypergame descriptions.
//!
//! A description is a list of ground facts, each ending in `.`:
//!
//! ```text
//! player(alice).           role(alice, row).
//! option(row, cooperate).  payoff(cooperate, defect, 0, 5).
//! chosen(a, b).            utility(r, a, b, u, v).
//! action(r, a).            nash(a, b).
//! ```
//!
//! `%` starts a comment running to the end of the line. Symbols match
//! `[a-z][a-z0-9_]*`, integers are decimal with an optional minus sign.
//! Facts may come in any order.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use crate::model::{
    BaseGame, GameDraft, ModelError, OptionId, PlayerId, RankTable, Role, StrategyProfile,
    SubjectiveGame, Violation,
};

/// 1-based line and column of a fact or token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Predicate {
    Player,
    Role,
    Option,
    Payoff,
    Chosen,
    Nash,
    Utility,
    Action,
}

impl Predicate {
    /// Vocabulary order, also the order facts are printed in.
    pub const ALL: [Predicate; 8] = [
        Predicate::Player,
        Predicate::Role,
        Predicate::Option,
        Predicate::Payoff,
        Predicate::Chosen,
        Predicate::Nash,
        Predicate::Utility,
        Predicate::Action,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Player => "player",
            Predicate::Role => "role",
            Predicate::Option => "option",
            Predicate::Payoff => "payoff",
            Predicate::Chosen => "chosen",
            Predicate::Nash => "nash",
            Predicate::Utility => "utility",
            Predicate::Action => "action",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Predicate::Player => 1,
            Predicate::Role | Predicate::Option | Predicate::Chosen => 2,
            Predicate::Nash | Predicate::Action => 2,
            Predicate::Payoff => 4,
            Predicate::Utility => 5,
        }
    }

    fn from_name(name: &str) -> Option<Predicate> {
        Predicate::ALL.into_iter().find(|p| p.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Symbol(String),
    Int(i64),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Symbol(s) => f.write_str(s),
            Term::Int(n) => write!(f, "{n}"),
        }
    }
}

/// A ground fact as written in the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub predicate: Predicate,
    pub args: Vec<Term>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical(String),
    Syntax(String),
    UnknownPredicate(String),
    ArityMismatch {
        predicate: Predicate,
        expected: usize,
        found: usize,
    },
    ExpectedSymbol(usize),
    ExpectedInteger(usize),
    NegativeRank(i64),
    RankTooLarge(i64),
    InvalidRole(String),
    DuplicateFact,
    DuplicatePayoff(OptionId, OptionId),
    DuplicateUtility(Role, OptionId, OptionId),
    UndeclaredOption(String),
    UndeclaredPlayer(String),
    ConflictingRole(String),
    MissingRole(String),
    AmbiguousAction(String),
    MultipleChosen,
    IncompleteView(Role, String),
    ActionsWithoutUtilities(Role),
    IgnoredNash,
    Game(Violation),
    View(ModelError),
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::Lexical(m) => write!(f, "lexical error: {m}"),
            ErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ErrorKind::UnknownPredicate(p) => write!(f, "unknown predicate `{p}`"),
            ErrorKind::ArityMismatch {
                predicate,
                expected,
                found,
            } => write!(
                f,
                "arity mismatch: `{}` takes {expected} arguments, found {found}",
                predicate.name()
            ),
            ErrorKind::ExpectedSymbol(i) => write!(f, "argument {i} must be a symbol"),
            ErrorKind::ExpectedInteger(i) => write!(f, "argument {i} must be an integer"),
            ErrorKind::NegativeRank(n) => write!(f, "utility ranks must be >= 0, found {n}"),
            ErrorKind::RankTooLarge(n) => write!(f, "utility rank {n} is too large"),
            ErrorKind::InvalidRole(r) => {
                write!(f, "`{r}` is not a role (expected `row` or `column`)")
            }
            ErrorKind::DuplicateFact => write!(f, "duplicate fact"),
            ErrorKind::DuplicatePayoff(a, b) => write!(f, "duplicate payoff cell ({a}, {b})"),
            ErrorKind::DuplicateUtility(r, a, b) => {
                write!(f, "duplicate utility cell ({a}, {b}) for {r}")
            }
            ErrorKind::UndeclaredOption(o) => write!(f, "undeclared option `{o}`"),
            ErrorKind::UndeclaredPlayer(p) => write!(f, "undeclared player `{p}`"),
            ErrorKind::ConflictingRole(m) => write!(f, "conflicting role assignment: {m}"),
            ErrorKind::MissingRole(p) => write!(f, "player `{p}` has no role"),
            ErrorKind::AmbiguousAction(a) => {
                write!(f, "ambiguous action `{a}`: it is an option of both roles")
            }
            ErrorKind::MultipleChosen => write!(f, "more than one `chosen` fact"),
            ErrorKind::IncompleteView(r, m) => write!(f, "incomplete {r} view: {m}"),
            ErrorKind::ActionsWithoutUtilities(r) => {
                write!(f, "{r} declares actions but no utilities")
            }
            ErrorKind::IgnoredNash => write!(f, "`nash` facts are solver output and are ignored"),
            ErrorKind::Game(v) => write!(f, "{v}"),
            ErrorKind::View(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: ErrorKind,
    pub span: Option<Span>,
}

impl Diagnostic {
    fn at(kind: ErrorKind, span: Span) -> Self {
        Diagnostic {
            kind,
            span: Some(span),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "{s}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// One or more problems found while reading a description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                f.write_char('\n')?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

impl From<Diagnostic> for ParseError {
    fn from(d: Diagnostic) -> Self {
        ParseError {
            diagnostics: vec![d],
        }
    }
}

/// A validated problem: the base game, the optional chosen profile and any
/// subjective views declared through `utility` / `action` facts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub base: BaseGame,
    pub target: Option<StrategyProfile>,
    /// At most one per role, row first.
    pub views: Vec<(Role, SubjectiveGame)>,
}

impl ProblemSpec {
    pub fn view(&self, role: Role) -> Option<&SubjectiveGame> {
        self.views.iter().find(|(r, _)| *r == role).map(|(_, v)| v)
    }
}

/// Result of a successful parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub spec: ProblemSpec,
    /// The facts as read, with their positions.
    pub facts: Vec<Fact>,
    pub warnings: Vec<Diagnostic>,
}

// ---------------------------------------------------------------------------
// lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Symbol(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Dot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Symbol(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' | ')' | ',' | '.' => {
                chars.next();
                col += 1;
                out.push((
                    match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        _ => Tok::Dot,
                    },
                    span,
                ));
            }
            'a'..='z' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Symbol(s), span));
            }
            '-' | '0'..='9' => {
                let mut s = String::new();
                if c == '-' {
                    s.push(c);
                    chars.next();
                    col += 1;
                }
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n = s.parse::<i64>().map_err(|_| {
                    Diagnostic::at(ErrorKind::Lexical(format!("invalid integer `{s}`")), span)
                })?;
                out.push((Tok::Int(n), span));
            }
            'A'..='Z' | '_' => {
                return Err(Diagnostic::at(
                    ErrorKind::Lexical(format!(
                        "unexpected `{c}`: variables are not supported, symbols start with a lowercase letter"
                    )),
                    span,
                ))
            }
            other => {
                return Err(Diagnostic::at(
                    ErrorKind::Lexical(format!("unexpected character `{}`", other.escape_default())),
                    span,
                ))
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// facts

/// Reads the raw fact list without interpreting it.
pub fn parse_facts(text: &str) -> Result<Vec<Fact>, ParseError> {
    let tokens = lex(text)?;
    let mut facts = Vec::new();
    let mut pos = 0;
    let end_span = tokens
        .last()
        .map(|t| t.1)
        .unwrap_or(Span { line: 1, col: 1 });

    let expect = |pos: &mut usize, want: &Tok, what: &str| -> Result<(), Diagnostic> {
        match tokens.get(*pos) {
            Some((t, _)) if t == want => {
                *pos += 1;
                Ok(())
            }
            Some((t, s)) => Err(Diagnostic::at(
                ErrorKind::Syntax(format!("expected {what}, found {t}")),
                *s,
            )),
            None => Err(Diagnostic::at(
                ErrorKind::Syntax(format!("expected {what}, found end of input")),
                end_span,
            )),
        }
    };

    while pos < tokens.len() {
        let (tok, span) = &tokens[pos];
        let name = match tok {
            Tok::Symbol(s) => s.clone(),
            other => {
                return Err(Diagnostic::at(
                    ErrorKind::Syntax(format!("expected a predicate name, found {other}")),
                    *span,
                )
                .into())
            }
        };
        let span = *span;
        pos += 1;
        let Some(predicate) = Predicate::from_name(&name) else {
            return Err(Diagnostic::at(ErrorKind::UnknownPredicate(name), span).into());
        };
        expect(&mut pos, &Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        loop {
            match tokens.get(pos) {
                Some((Tok::Symbol(s), _)) => args.push(Term::Symbol(s.clone())),
                Some((Tok::Int(n), _)) => args.push(Term::Int(*n)),
                Some((t, s)) => {
                    return Err(Diagnostic::at(
                        ErrorKind::Syntax(format!("expected an argument, found {t}")),
                        *s,
                    )
                    .into())
                }
                None => {
                    return Err(Diagnostic::at(
                        ErrorKind::Syntax("expected an argument, found end of input".into()),
                        end_span,
                    )
                    .into())
                }
            }
            pos += 1;
            match tokens.get(pos) {
                Some((Tok::Comma, _)) => pos += 1,
                _ => break,
            }
        }
        expect(&mut pos, &Tok::RParen, "`,` or `)`")?;
        expect(&mut pos, &Tok::Dot, "`.` after fact")?;
        if args.len() != predicate.arity() {
            return Err(Diagnostic::at(
                ErrorKind::ArityMismatch {
                    predicate,
                    expected: predicate.arity(),
                    found: args.len(),
                },
                span,
            )
            .into());
        }
        facts.push(Fact {
            predicate,
            args,
            span,
        });
    }
    Ok(facts)
}

// ---------------------------------------------------------------------------
// interpretation

struct Interp {
    errors: Vec<Diagnostic>,
    warnings: Vec<Diagnostic>,
}

impl Interp {
    fn err(&mut self, kind: ErrorKind, span: Span) {
        self.errors.push(Diagnostic::at(kind, span));
    }

    fn symbol<'f>(&mut self, fact: &'f Fact, i: usize) -> Option<&'f str> {
        match &fact.args[i] {
            Term::Symbol(s) => Some(s),
            Term::Int(_) => {
                self.err(ErrorKind::ExpectedSymbol(i + 1), fact.span);
                None
            }
        }
    }

    fn int(&mut self, fact: &Fact, i: usize) -> Option<i64> {
        match &fact.args[i] {
            Term::Int(n) => Some(*n),
            Term::Symbol(_) => {
                self.err(ErrorKind::ExpectedInteger(i + 1), fact.span);
                None
            }
        }
    }

    fn role(&mut self, fact: &Fact, i: usize) -> Option<Role> {
        let s = self.symbol(fact, i)?;
        match s.parse::<Role>() {
            Ok(r) => Some(r),
            Err(_) => {
                self.err(ErrorKind::InvalidRole(s.to_string()), fact.span);
                None
            }
        }
    }

    fn rank(&mut self, fact: &Fact, i: usize) -> Option<u32> {
        let n = self.int(fact, i)?;
        if n < 0 {
            self.err(ErrorKind::NegativeRank(n), fact.span);
            return None;
        }
        match u32::try_from(n) {
            Ok(r) => Some(r),
            Err(_) => {
                self.err(ErrorKind::RankTooLarge(n), fact.span);
                None
            }
        }
    }
}

fn sym(s: &str) -> OptionId {
    OptionId::new(s).expect("lexer only produces valid symbols")
}

/// Parses a description into a validated [`ProblemSpec`].
pub fn parse(text: &str) -> Result<Parsed, ParseError> {
    let facts = parse_facts(text)?;
    let mut it = Interp {
        errors: Vec::new(),
        warnings: Vec::new(),
    };

    let mut players: Vec<(String, Span)> = Vec::new();
    let mut roles: Vec<(String, Role, Span)> = Vec::new();
    let mut options: [Vec<(String, Span)>; 2] = [Vec::new(), Vec::new()];
    let mut payoffs: Vec<(String, String, i64, i64, Span)> = Vec::new();
    let mut chosen: Vec<(String, String, Span)> = Vec::new();
    let mut utilities: Vec<(Role, String, String, u32, u32, Span)> = Vec::new();
    let mut actions: Vec<(Role, String, Span)> = Vec::new();
    let slot = |r: Role| if r == Role::Row { 0 } else { 1 };

    for fact in &facts {
        let span = fact.span;
        match fact.predicate {
            Predicate::Player => {
                if let Some(p) = it.symbol(fact, 0) {
                    if players.iter().any(|(q, _)| q == p) {
                        it.err(ErrorKind::DuplicateFact, span);
                    } else {
                        players.push((p.to_string(), span));
                    }
                }
            }
            Predicate::Role => {
                let (p, r) = (it.symbol(fact, 0), it.role(fact, 1));
                if let (Some(p), Some(r)) = (p, r) {
                    if let Some((_, prev, _)) = roles.iter().find(|(q, _, _)| q == p) {
                        if *prev == r {
                            it.err(ErrorKind::DuplicateFact, span);
                        } else {
                            it.err(
                                ErrorKind::ConflictingRole(format!("`{p}` is both {prev} and {r}")),
                                span,
                            );
                        }
                    } else if let Some((q, _, _)) = roles.iter().find(|(_, s, _)| *s == r) {
                        it.err(
                            ErrorKind::ConflictingRole(format!(
                                "{r} is already held by `{q}`, cannot also assign it to `{p}`"
                            )),
                            span,
                        );
                    } else {
                        roles.push((p.to_string(), r, span));
                    }
                }
            }
            Predicate::Option => {
                let (r, a) = (it.role(fact, 0), it.symbol(fact, 1));
                if let (Some(r), Some(a)) = (r, a) {
                    let list = &mut options[slot(r)];
                    if list.iter().any(|(b, _)| b == a) {
                        it.err(ErrorKind::Game(Violation::DuplicateOption(r, sym(a))), span);
                    } else {
                        list.push((a.to_string(), span));
                    }
                }
            }
            Predicate::Payoff => {
                let (a, b) = (it.symbol(fact, 0), it.symbol(fact, 1));
                let (u, v) = (it.int(fact, 2), it.int(fact, 3));
                if let (Some(a), Some(b), Some(u), Some(v)) = (a, b, u, v) {
                    payoffs.push((a.to_string(), b.to_string(), u, v, span));
                }
            }
            Predicate::Chosen => {
                let (a, b) = (it.symbol(fact, 0), it.symbol(fact, 1));
                if let (Some(a), Some(b)) = (a, b) {
                    chosen.push((a.to_string(), b.to_string(), span));
                }
            }
            Predicate::Nash => {
                it.symbol(fact, 0);
                it.symbol(fact, 1);
                it.warnings
                    .push(Diagnostic::at(ErrorKind::IgnoredNash, span));
            }
            Predicate::Utility => {
                let r = it.role(fact, 0);
                let (a, b) = (it.symbol(fact, 1), it.symbol(fact, 2));
                let (u, v) = (it.rank(fact, 3), it.rank(fact, 4));
                if let (Some(r), Some(a), Some(b), Some(u), Some(v)) = (r, a, b, u, v) {
                    utilities.push((r, a.to_string(), b.to_string(), u, v, span));
                }
            }
            Predicate::Action => {
                let (r, a) = (it.role(fact, 0), it.symbol(fact, 1));
                if let (Some(r), Some(a)) = (r, a) {
                    if actions.iter().any(|(s, b, _)| *s == r && b == a) {
                        it.err(ErrorKind::DuplicateFact, span);
                    } else {
                        actions.push((r, a.to_string(), span));
                    }
                }
            }
        }
    }

    // cross-references
    for (p, _, span) in &roles {
        if !players.iter().any(|(q, _)| q == p) {
            it.err(ErrorKind::UndeclaredPlayer(p.clone()), *span);
        }
    }
    for (p, span) in &players {
        if !roles.iter().any(|(q, _, _)| q == p) {
            it.err(ErrorKind::MissingRole(p.clone()), *span);
        }
    }
    let declared = |r: Role, a: &str| options[slot(r)].iter().any(|(b, _)| b == a);
    let mut cells = HashSet::new();
    for (a, b, _, _, span) in &payoffs {
        let mut ok = true;
        for (r, o) in [(Role::Row, a), (Role::Column, b)] {
            if !declared(r, o) {
                it.err(ErrorKind::UndeclaredOption(o.clone()), *span);
                ok = false;
            }
        }
        if ok && !cells.insert((a.clone(), b.clone())) {
            it.err(ErrorKind::DuplicatePayoff(sym(a), sym(b)), *span);
        }
    }
    if chosen.len() > 1 {
        it.err(ErrorKind::MultipleChosen, chosen[1].2);
    }
    for (a, b, span) in chosen.iter().take(1) {
        for (r, o) in [(Role::Row, a), (Role::Column, b)] {
            if !declared(r, o) {
                it.err(ErrorKind::UndeclaredOption(o.clone()), *span);
            }
        }
    }

    let mut view_cells: HashMap<(Role, String, String), Span> = HashMap::new();
    for (r, a, b, _, _, span) in &utilities {
        let mut ok = true;
        for (side, o) in [(Role::Row, a), (Role::Column, b)] {
            if !declared(side, o) {
                it.err(ErrorKind::UndeclaredOption(o.clone()), *span);
                ok = false;
            }
        }
        if ok
            && view_cells
                .insert((*r, a.clone(), b.clone()), *span)
                .is_some()
        {
            it.err(ErrorKind::DuplicateUtility(*r, sym(a), sym(b)), *span);
        }
    }
    // (owner role, side of the believed move, move)
    let mut believed: Vec<(Role, Role, String)> = Vec::new();
    for (r, a, span) in &actions {
        match (declared(*r, a), declared(r.opposite(), a)) {
            (true, true) => it.err(ErrorKind::AmbiguousAction(a.clone()), *span),
            (true, false) => believed.push((*r, *r, a.clone())),
            (false, true) => believed.push((*r, r.opposite(), a.clone())),
            (false, false) => it.err(ErrorKind::UndeclaredOption(a.clone()), *span),
        }
    }

    if !it.errors.is_empty() {
        return Err(ParseError {
            diagnostics: it.errors,
        });
    }

    let draft = GameDraft {
        players: players
            .iter()
            .map(|(p, _)| {
                let role = roles.iter().find(|(q, _, _)| q == p).unwrap().1;
                (PlayerId::new(p.as_str()).unwrap(), role)
            })
            .collect(),
        row_options: options[0].iter().map(|(o, _)| sym(o)).collect(),
        col_options: options[1].iter().map(|(o, _)| sym(o)).collect(),
        payoffs: payoffs
            .iter()
            .map(|(a, b, u, v, _)| (sym(a), sym(b), *u, *v))
            .collect(),
    };
    let target = chosen
        .first()
        .map(|(a, b, _)| StrategyProfile::new(sym(a), sym(b)));
    let base = match BaseGame::new(draft) {
        Ok(b) => b,
        Err(ModelError::InvalidGame(report)) => {
            let first = facts.first().map(|f| f.span);
            return Err(ParseError {
                diagnostics: report
                    .violations
                    .into_iter()
                    .map(|v| {
                        let span = match &v {
                            Violation::PlayerCount(_) => first,
                            _ => None,
                        };
                        Diagnostic {
                            kind: ErrorKind::Game(v),
                            span,
                        }
                    })
                    .collect(),
            });
        }
        Err(e) => {
            return Err(Diagnostic {
                kind: ErrorKind::View(e),
                span: None,
            }
            .into())
        }
    };

    let mut views = Vec::new();
    for role in Role::BOTH {
        let mine: Vec<_> = utilities.iter().filter(|u| u.0 == role).collect();
        let my_actions: Vec<_> = believed.iter().filter(|b| b.0 == role).collect();
        if mine.is_empty() {
            if let Some((_, _, span)) = actions.iter().find(|a| a.0 == role) {
                return Err(Diagnostic::at(ErrorKind::ActionsWithoutUtilities(role), *span).into());
            }
            continue;
        }
        let side = |s: Role| -> Vec<OptionId> {
            let from_actions: Vec<&str> = my_actions
                .iter()
                .filter(|b| b.1 == s)
                .map(|b| b.2.as_str())
                .collect();
            base.options(s)
                .iter()
                .filter(|o| {
                    if from_actions.is_empty() {
                        mine.iter().any(|u| {
                            let cell = if s == Role::Row { &u.1 } else { &u.2 };
                            cell == o.as_str()
                        })
                    } else {
                        from_actions.contains(&o.as_str())
                    }
                })
                .cloned()
                .collect()
        };
        let (rows, cols) = (side(Role::Row), side(Role::Column));
        let span = mine[0].5;
        let incomplete = |m: String| Diagnostic::at(ErrorKind::IncompleteView(role, m), span);
        for u in &mine {
            if !rows.iter().any(|o| o.as_str() == u.1) || !cols.iter().any(|o| o.as_str() == u.2) {
                return Err(Diagnostic::at(
                    ErrorKind::IncompleteView(
                        role,
                        format!(
                            "utility ({}, {}) lies outside the believed actions",
                            u.1, u.2
                        ),
                    ),
                    u.5,
                )
                .into());
            }
        }
        let cells: Vec<(OptionId, OptionId, u32, u32)> = mine
            .iter()
            .map(|u| (sym(&u.1), sym(&u.2), u.3, u.4))
            .collect();
        let table =
            RankTable::from_cells(rows, cols, cells.iter().map(|(a, b, u, v)| (a, b, *u, *v)))
                .map_err(|e| match e {
                    ModelError::InvalidRankTable(m) => incomplete(m),
                    e => Diagnostic::at(ErrorKind::View(e), span),
                })?;
        let owner = base.player_with_role(role).clone();
        let view = SubjectiveGame::new(&base, owner, table)
            .map_err(|e| Diagnostic::at(ErrorKind::View(e), span))?;
        views.push((role, view));
    }

    Ok(Parsed {
        spec: ProblemSpec {
            base,
            target,
            views,
        },
        facts,
        warnings: it.warnings,
    })
}

/// Canonical text: facts grouped by predicate in vocabulary order, one per
/// line, LF endings. `action` facts are written only when no option name is
/// shared by both roles; otherwise the utility table alone fixes the view.
pub fn render(spec: &ProblemSpec) -> String {
    let base = &spec.base;
    let mut out = String::new();
    for (p, _) in base.players() {
        writeln!(out, "player({p}).").unwrap();
    }
    for (p, r) in base.players() {
        writeln!(out, "role({p}, {r}).").unwrap();
    }
    for role in Role::BOTH {
        for o in base.options(role) {
            writeln!(out, "option({role}, {o}).").unwrap();
        }
    }
    for (i, a) in base.row_options().iter().enumerate() {
        for (j, b) in base.col_options().iter().enumerate() {
            let (u, v) = base.payoff_at(i, j);
            writeln!(out, "payoff({a}, {b}, {u}, {v}).").unwrap();
        }
    }
    if let Some(t) = &spec.target {
        writeln!(out, "chosen({}, {}).", t.row, t.col).unwrap();
    }
    for (role, view) in &spec.views {
        for (a, b, (u, v)) in view.table().cells() {
            writeln!(out, "utility({role}, {a}, {b}, {u}, {v}).").unwrap();
        }
    }
    let disjoint = !base
        .row_options()
        .iter()
        .any(|o| base.col_options().contains(o));
    if disjoint {
        for (role, view) in &spec.views {
            for side in [*role, role.opposite()] {
                for a in view.believed(side) {
                    writeln!(out, "action({role}, {a}).").unwrap();
                }
            }
        }
    }
    out
}
