use std::fmt;

/// Location of a token or construct in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub column: u32,
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// An identifier with the place it was written. Equality ignores the span.
#[derive(Debug, Clone, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident {
            name: name.into(),
            span: Span::default(),
        }
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Fluent(Ident),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn fluent(name: impl Into<String>) -> Self {
        Formula::Fluent(Ident::new(name))
    }

    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    /// Left-nested conjunction; `True` for no operands.
    pub fn all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` for no operands.
    pub fn any(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    /// Calls `visit` on every fluent occurrence.
    pub fn for_each_fluent<'a>(&'a self, visit: &mut impl FnMut(&'a Ident)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Fluent(id) => visit(id),
            Formula::Not(a) => a.for_each_fluent(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.for_each_fluent(visit);
                b.for_each_fluent(visit);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            _ => 6,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, child: &Formula, min: u8) -> fmt::Result {
        if child.precedence() < min {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            Formula::True => f.write_str("TRUE"),
            Formula::False => f.write_str("FALSE"),
            Formula::Fluent(id) => write!(f, "{id}"),
            Formula::Not(a) => {
                f.write_str("!")?;
                self.write_child(f, a, p)
            }
            // `&`, `|` and `<->` are parsed left-associative, `->` right-associative.
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                let op = match self {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " <-> ",
                };
                self.write_child(f, a, p)?;
                f.write_str(op)?;
                self.write_child(f, b, p + 1)
            }
            Formula::Implies(a, b) => {
                self.write_child(f, a, p + 1)?;
                f.write_str(" -> ")?;
                self.write_child(f, b, p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub fluent: Ident,
    pub positive: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("!")?;
        }
        write!(f, "{}", self.fluent)
    }
}

/// `action CAUSES effect [IF condition]`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalRule {
    pub effect: Literal,
    pub condition: Option<Formula>,
}

/// Everything the description says about one action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: Ident,
    pub preconditions: Vec<Formula>,
    pub causes: Vec<CausalRule>,
    pub possibly_changes: Vec<Ident>,
}

impl ActionDecl {
    pub fn new(name: impl Into<String>) -> Self {
        ActionDecl {
            name: Ident::new(name),
            preconditions: Vec::new(),
            causes: Vec::new(),
            possibly_changes: Vec::new(),
        }
    }
}

/// A parsed domain description. Names are resolved: every identifier used in
/// a rule or formula is a declared action or fluent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainAst {
    pub name: Ident,
    pub actions: Vec<ActionDecl>,
    /// All fluents are boolean.
    pub fluents: Vec<Ident>,
    pub inertial: Vec<Ident>,
    pub always: Vec<Formula>,
    pub initially: Formula,
    pub goal: Formula,
}

impl DomainAst {
    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.name.name == name)
    }

    pub fn fluent_index(&self, name: &str) -> Option<usize> {
        self.fluents.iter().position(|f| f.name == name)
    }

    pub fn action_names(&self) -> Vec<String> {
        self.actions.iter().map(|a| a.name.name.clone()).collect()
    }

    pub fn fluent_names(&self) -> Vec<String> {
        self.fluents.iter().map(|f| f.name.clone()).collect()
    }

    pub fn is_inertial(&self, fluent: &str) -> bool {
        self.inertial.iter().any(|f| f.name == fluent)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Ident]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// Renders the description in the concrete syntax accepted by the parser.
impl fmt::Display for DomainAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DOMAIN {}", self.name)?;
        writeln!(f)?;
        f.write_str("ACTIONS ")?;
        let names: Vec<Ident> = self.actions.iter().map(|a| a.name.clone()).collect();
        write_list(f, &names)?;
        writeln!(f, ";")?;
        f.write_str("FLUENTS ")?;
        write_list(f, &self.fluents)?;
        writeln!(f, " : boolean;")?;
        if !self.inertial.is_empty() {
            f.write_str("INERTIAL ")?;
            write_list(f, &self.inertial)?;
            writeln!(f, ";")?;
        }
        if !self.always.is_empty() {
            writeln!(f)?;
            for c in &self.always {
                writeln!(f, "ALWAYS {c};")?;
            }
        }
        for a in &self.actions {
            if a.preconditions.is_empty() && a.causes.is_empty() && a.possibly_changes.is_empty() {
                continue;
            }
            writeln!(f)?;
            for p in &a.preconditions {
                writeln!(f, "{} HAS PRECONDITIONS {p};", a.name)?;
            }
            for rule in &a.causes {
                write!(f, "{} CAUSES {}", a.name, rule.effect)?;
                if let Some(c) = &rule.condition {
                    write!(f, " IF {c}")?;
                }
                writeln!(f, ";")?;
            }
            if !a.possibly_changes.is_empty() {
                write!(f, "{} POSSIBLY CHANGES ", a.name)?;
                write_list(f, &a.possibly_changes)?;
                writeln!(f, ";")?;
            }
        }
        writeln!(f)?;
        writeln!(f, "INITIALLY {};", self.initially)?;
        writeln!(f, "CONFORMANT {};", self.goal)
    }
}
