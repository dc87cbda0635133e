use std::collections::HashMap;

use super::ast::{ActionDecl, CausalRule, DomainAst, Formula, Ident, Literal, Span};
use super::lexer::{tokenize, Keyword, Token, TokenKind};
use super::LangError;

/// Parses a domain description and resolves every name in it.
pub fn parse(text: &str) -> Result<DomainAst, LangError> {
    let tokens = tokenize(text)?;
    let raw = Parser { tokens, pos: 0 }.file()?;
    resolve(raw)
}

enum RuleBody {
    Precondition(Formula),
    Causes(CausalRule),
    PossiblyChanges(Vec<Ident>),
}

struct RawRule {
    action: Ident,
    body: RuleBody,
}

#[derive(Default)]
struct RawFile {
    name: Option<Ident>,
    actions: Vec<Ident>,
    fluents: Vec<Ident>,
    inertial: Vec<Ident>,
    always: Vec<Formula>,
    rules: Vec<RawRule>,
    initially: Vec<(Formula, Span)>,
    goal: Vec<(Formula, Span)>,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, LangError> {
        let t = self.peek();
        Err(LangError::Syntax {
            expected: expected.to_string(),
            found: t.kind.describe(),
            span: t.span,
        })
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, LangError> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            self.error(&kind.describe())
        }
    }

    fn keyword(&mut self, k: Keyword) -> Result<Token, LangError> {
        self.expect(TokenKind::Keyword(k))
    }

    fn ident(&mut self) -> Result<Ident, LangError> {
        match &self.peek().kind {
            TokenKind::Ident(name) => {
                let ident = Ident {
                    name: name.clone(),
                    span: self.peek().span,
                };
                self.bump();
                Ok(ident)
            }
            _ => self.error("identifier"),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<Ident>, LangError> {
        let mut out = vec![self.ident()?];
        while self.peek().kind == TokenKind::Comma {
            self.bump();
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn file(mut self) -> Result<RawFile, LangError> {
        let mut raw = RawFile::default();
        self.keyword(Keyword::Domain)?;
        raw.name = Some(self.ident()?);
        loop {
            let tok = self.peek().clone();
            match tok.kind {
                TokenKind::Eof => break,
                TokenKind::Keyword(Keyword::Actions) => {
                    self.bump();
                    raw.actions.extend(self.ident_list()?);
                }
                TokenKind::Keyword(Keyword::Fluents) => {
                    self.bump();
                    raw.fluents.extend(self.ident_list()?);
                    self.expect(TokenKind::Colon)?;
                    self.keyword(Keyword::Boolean)?;
                }
                TokenKind::Keyword(Keyword::Inertial) => {
                    self.bump();
                    raw.inertial.extend(self.ident_list()?);
                }
                TokenKind::Keyword(Keyword::Always) => {
                    self.bump();
                    raw.always.push(self.formula()?);
                }
                TokenKind::Keyword(Keyword::Initially) => {
                    self.bump();
                    raw.initially.push((self.formula()?, tok.span));
                }
                TokenKind::Keyword(Keyword::Conformant) => {
                    self.bump();
                    raw.goal.push((self.formula()?, tok.span));
                }
                TokenKind::Ident(_) => {
                    let action = self.ident()?;
                    let body = self.rule_body()?;
                    raw.rules.push(RawRule { action, body });
                }
                _ => return self.error("a declaration"),
            }
            self.expect(TokenKind::Semi)?;
        }
        Ok(raw)
    }

    fn rule_body(&mut self) -> Result<RuleBody, LangError> {
        match self.peek().kind {
            TokenKind::Keyword(Keyword::Has) => {
                self.bump();
                self.keyword(Keyword::Preconditions)?;
                Ok(RuleBody::Precondition(self.formula()?))
            }
            TokenKind::Keyword(Keyword::Causes) => {
                self.bump();
                let positive = if self.peek().kind == TokenKind::Bang {
                    self.bump();
                    false
                } else {
                    true
                };
                let fluent = self.ident()?;
                let condition = if self.peek().kind == TokenKind::Keyword(Keyword::If) {
                    self.bump();
                    Some(self.formula()?)
                } else {
                    None
                };
                Ok(RuleBody::Causes(CausalRule {
                    effect: Literal { fluent, positive },
                    condition,
                }))
            }
            TokenKind::Keyword(Keyword::Possibly) => {
                self.bump();
                self.keyword(Keyword::Changes)?;
                Ok(RuleBody::PossiblyChanges(self.ident_list()?))
            }
            _ => self.error("`HAS PRECONDITIONS`, `CAUSES` or `POSSIBLY CHANGES`"),
        }
    }

    // formula := iff ; iff := imp { "<->" imp } ; imp := or [ "->" imp ]
    // or := and { "|" and } ; and := unary { "&" unary }
    fn formula(&mut self) -> Result<Formula, LangError> {
        let mut lhs = self.implication()?;
        while self.peek().kind == TokenKind::DoubleArrow {
            self.bump();
            lhs = lhs.iff(self.implication()?);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, LangError> {
        let lhs = self.disjunction()?;
        if self.peek().kind == TokenKind::Arrow {
            self.bump();
            return Ok(lhs.implies(self.implication()?));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LangError> {
        let mut lhs = self.conjunction()?;
        while self.peek().kind == TokenKind::Pipe {
            self.bump();
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, LangError> {
        let mut lhs = self.unary()?;
        while self.peek().kind == TokenKind::Amp {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LangError> {
        match &self.peek().kind {
            TokenKind::Bang => {
                self.bump();
                Ok(self.unary()?.not())
            }
            TokenKind::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(TokenKind::RParen)?;
                Ok(f)
            }
            TokenKind::Keyword(Keyword::True) => {
                self.bump();
                Ok(Formula::True)
            }
            TokenKind::Keyword(Keyword::False) => {
                self.bump();
                Ok(Formula::False)
            }
            TokenKind::Ident(_) => Ok(Formula::Fluent(self.ident()?)),
            _ => self.error("a formula"),
        }
    }
}

fn resolve(raw: RawFile) -> Result<DomainAst, LangError> {
    let mut declared: HashMap<String, (&'static str, Span)> = HashMap::new();
    let mut declare = |kind: &'static str, id: &Ident| -> Result<(), LangError> {
        if let Some((_, first)) = declared.get(&id.name) {
            return Err(LangError::Duplicate {
                name: id.name.clone(),
                span: id.span,
                first: *first,
            });
        }
        declared.insert(id.name.clone(), (kind, id.span));
        Ok(())
    };
    for a in &raw.actions {
        declare("action", a)?;
    }
    for f in &raw.fluents {
        declare("fluent", f)?;
    }
    let is = |kind: &str, id: &Ident| declared.get(&id.name).is_some_and(|(k, _)| *k == kind);
    let need_fluent = |id: &Ident| -> Result<(), LangError> {
        if is("fluent", id) {
            Ok(())
        } else {
            Err(LangError::Undeclared {
                kind: "fluent",
                name: id.name.clone(),
                span: id.span,
            })
        }
    };
    let check_formula = |f: &Formula| -> Result<(), LangError> {
        let mut result = Ok(());
        f.for_each_fluent(&mut |id| {
            if result.is_ok() {
                result = need_fluent(id);
            }
        });
        result
    };

    let mut inertial: Vec<Ident> = Vec::new();
    for id in &raw.inertial {
        need_fluent(id)?;
        if let Some(first) = inertial.iter().find(|f| f.name == id.name) {
            return Err(LangError::Duplicate {
                name: id.name.clone(),
                span: id.span,
                first: first.span,
            });
        }
        inertial.push(id.clone());
    }
    for f in &raw.always {
        check_formula(f)?;
    }

    let mut actions: Vec<ActionDecl> = raw
        .actions
        .iter()
        .map(|id| ActionDecl {
            name: id.clone(),
            preconditions: Vec::new(),
            causes: Vec::new(),
            possibly_changes: Vec::new(),
        })
        .collect();
    for rule in raw.rules {
        let Some(decl) = actions.iter_mut().find(|a| a.name.name == rule.action.name) else {
            return Err(LangError::Undeclared {
                kind: "action",
                name: rule.action.name,
                span: rule.action.span,
            });
        };
        match rule.body {
            RuleBody::Precondition(f) => {
                check_formula(&f)?;
                decl.preconditions.push(f);
            }
            RuleBody::Causes(c) => {
                need_fluent(&c.effect.fluent)?;
                if let Some(cond) = &c.condition {
                    check_formula(cond)?;
                }
                decl.causes.push(c);
            }
            RuleBody::PossiblyChanges(ids) => {
                for id in ids {
                    need_fluent(&id)?;
                    if !decl.possibly_changes.contains(&id) {
                        decl.possibly_changes.push(id);
                    }
                }
            }
        }
    }

    let single = |mut clauses: Vec<(Formula, Span)>, clause: &'static str| {
        match clauses.len() {
            0 => Err(LangError::MissingClause { clause }),
            1 => Ok(clauses.pop().unwrap().0),
            _ => Err(LangError::RepeatedClause {
                clause,
                span: clauses[1].1,
            }),
        }
    };
    let initially = single(raw.initially, "INITIALLY")?;
    let goal = single(raw.goal, "CONFORMANT")?;
    check_formula(&initially)?;
    check_formula(&goal)?;

    Ok(DomainAst {
        name: raw.name.expect("DOMAIN header parsed"),
        actions,
        fluents: raw.fluents,
        inertial,
        always: raw.always,
        initially,
        goal,
    })
}
