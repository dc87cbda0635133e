use std::fmt::Write as _;

use super::{BenchError, Family, FamilySpec, Variant};

/// Accumulates the clauses of one domain file.
struct DomainText {
    name: String,
    actions: Vec<String>,
    fluents: Vec<String>,
    inertial: Vec<String>,
    always: Vec<String>,
    blocks: Vec<Vec<String>>,
    initially: String,
    goal: String,
}

impl DomainText {
    fn new(name: impl Into<String>) -> Self {
        DomainText {
            name: name.into(),
            actions: Vec::new(),
            fluents: Vec::new(),
            inertial: Vec::new(),
            always: Vec::new(),
            blocks: Vec::new(),
            initially: "TRUE".into(),
            goal: "TRUE".into(),
        }
    }

    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "DOMAIN {}\n", self.name);
        let _ = writeln!(out, "ACTIONS {};", self.actions.join(", "));
        let _ = writeln!(out, "FLUENTS {} : boolean;", self.fluents.join(", "));
        if !self.inertial.is_empty() {
            let _ = writeln!(out, "INERTIAL {};", self.inertial.join(", "));
        }
        out.push('\n');
        if !self.always.is_empty() {
            for a in &self.always {
                let _ = writeln!(out, "ALWAYS {a};");
            }
            out.push('\n');
        }
        for block in self.blocks.iter().filter(|b| !b.is_empty()) {
            for line in block {
                let _ = writeln!(out, "{line};");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "INITIALLY {};", self.initially);
        let _ = writeln!(out, "CONFORMANT {};", self.goal);
        out
    }
}

fn conj(parts: &[String]) -> String {
    if parts.is_empty() {
        "TRUE".into()
    } else {
        parts.join(" & ")
    }
}

fn disj(parts: &[String]) -> String {
    if parts.is_empty() {
        "FALSE".into()
    } else {
        parts.join(" | ")
    }
}

fn paren(s: String) -> String {
    format!("({s})")
}

/// Exactly one of `names` holds.
fn one_hot(names: &[String]) -> Vec<String> {
    match names {
        [] => vec!["FALSE".into()],
        [a] => vec![a.clone()],
        [a, b] => vec![format!("{a} <-> !{b}")],
        _ => {
            let mut out = vec![names.join(" | ")];
            for (i, a) in names.iter().enumerate() {
                for b in &names[i + 1..] {
                    out.push(format!("!({a} & {b})"));
                }
            }
            out
        }
    }
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Generates the domain file of `spec`. Output depends only on `spec`.
pub fn generate(spec: &FamilySpec) -> Result<String, BenchError> {
    spec.check()?;
    let d = match spec.family {
        Family::Bt => bt(spec.size),
        Family::Btc => toilet(spec, "BTC", false, false),
        Family::Btuc => toilet(spec, "BTUC", true, spec.variant == Variant::Uncertain),
        Family::Bmtc => bmtc(spec.size, spec.extra, spec.variant),
        Family::Ring | Family::Uring | Family::Ndring => ring(spec),
        Family::Square => grid(spec, &["x", "y"]),
        Family::Cube => grid(spec, &["x", "y", "z"]),
        Family::Omelette => omelette(spec.size),
    };
    Ok(d.render())
}

fn bt(p: usize) -> DomainText {
    let packages = numbered("In_", p);
    let mut d = DomainText::new("BT");
    d.actions = numbered("Dunk_", p);
    d.fluents = packages.clone();
    d.fluents.push("Defused".into());
    d.inertial = d.fluents.clone();
    d.always = one_hot(&packages);
    d.blocks.push(
        (1..=p)
            .map(|i| format!("Dunk_{i} CAUSES Defused IF In_{i}"))
            .collect(),
    );
    d.initially = "!Defused".into();
    d.goal = "Defused".into();
    d
}

/// BTC and both BTUC variants share one layout.
fn toilet(spec: &FamilySpec, name: &str, uncertain_effect: bool, uncertain_start: bool) -> DomainText {
    let p = spec.size;
    let packages = numbered("In_", p);
    let mut d = DomainText::new(name);
    d.actions = numbered("Dunk_", p);
    d.actions.push("Flush".into());
    d.fluents = packages.clone();
    d.fluents.extend(["Defused".into(), "Clogged".into()]);
    d.inertial = vec!["Clogged".into(), "Defused".into()];
    d.inertial.extend(packages.iter().cloned());
    d.always = one_hot(&packages);
    d.blocks.push(vec!["Flush CAUSES !Clogged".into()]);
    let mut dunks = Vec::new();
    for i in 1..=p {
        dunks.push(format!("Dunk_{i} HAS PRECONDITIONS !Clogged"));
        dunks.push(format!("Dunk_{i} CAUSES Defused IF In_{i}"));
        dunks.push(if uncertain_effect {
            format!("Dunk_{i} POSSIBLY CHANGES Clogged")
        } else {
            format!("Dunk_{i} CAUSES Clogged")
        });
    }
    d.blocks.push(dunks);
    if uncertain_start {
        d.initially = "!Defused".into();
        d.goal = "Defused & !Clogged".into();
    } else {
        d.initially = "!Defused & !Clogged".into();
        d.goal = "Defused".into();
    }
    d
}

fn bmtc(p: usize, t: usize, uncertainty: Variant) -> DomainText {
    let packages = numbered("In_", p);
    let toilets = numbered("Clogged_", t);
    let mut d = DomainText::new("BMTC");
    for i in 1..=p {
        for j in 1..=t {
            d.actions.push(format!("Dunk_{i}_{j}"));
        }
    }
    d.actions.extend(numbered("Flush_", t));
    d.fluents = packages.clone();
    d.fluents.push("Defused".into());
    d.fluents.extend(toilets.iter().cloned());
    d.inertial = d.fluents.clone();
    d.always = one_hot(&packages);
    d.blocks
        .push((1..=t).map(|j| format!("Flush_{j} CAUSES !Clogged_{j}")).collect());
    for i in 1..=p {
        let mut block = Vec::new();
        for j in 1..=t {
            block.push(format!("Dunk_{i}_{j} HAS PRECONDITIONS !Clogged_{j}"));
            block.push(format!("Dunk_{i}_{j} CAUSES Defused IF In_{i}"));
            block.push(format!("Dunk_{i}_{j} CAUSES Clogged_{j}"));
        }
        d.blocks.push(block);
    }
    let mut init = vec!["!Defused".to_string()];
    for j in 1..=t {
        let known = match uncertainty {
            Variant::Mid => j % 2 == 0,
            Variant::High => false,
            _ => true,
        };
        if known {
            init.push(format!("!Clogged_{j}"));
        }
    }
    d.initially = conj(&init);
    d.goal = "Defused".into();
    d
}

fn ring(spec: &FamilySpec) -> DomainText {
    let r = spec.size;
    let at = numbered("at_", r);
    let mut d = DomainText::new(spec.family.name());
    d.actions = ["move_cw", "move_ccw", "close", "lock"].map(String::from).to_vec();
    d.fluents = at.clone();
    for i in 1..=r {
        d.fluents.push(format!("closed_{i}"));
        d.fluents.push(format!("locked_{i}"));
    }
    d.inertial = d.fluents.clone();
    if spec.family == Family::Ndring {
        d.fluents.extend(numbered("nd_", spec.extra));
    }
    d.always = one_hot(&at);
    d.always
        .extend((1..=r).map(|i| format!("locked_{i} -> closed_{i}")));
    let next = |i: usize| i % r + 1;
    let prev = |i: usize| (i + r - 2) % r + 1;
    for (action, to) in [("move_cw", &next as &dyn Fn(usize) -> usize), ("move_ccw", &prev)] {
        let mut block = Vec::new();
        for i in 1..=r {
            block.push(format!("{action} CAUSES at_{} IF at_{i}", to(i)));
            block.push(format!("{action} CAUSES !at_{i} IF at_{i}"));
        }
        d.blocks.push(block);
    }
    d.blocks
        .push((1..=r).map(|i| format!("close CAUSES closed_{i} IF at_{i}")).collect());
    d.blocks.push(
        (1..=r)
            .map(|i| format!("lock CAUSES locked_{i} IF at_{i} & closed_{i}"))
            .collect(),
    );
    if spec.family == Family::Uring {
        let windows = numbered("closed_", r).join(", ");
        d.blocks.push(
            d.actions
                .iter()
                .map(|a| format!("{a} POSSIBLY CHANGES {windows}"))
                .collect(),
        );
    }
    d.goal = conj(&numbered("locked_", r));
    d
}

/// Central cell index per axis, 1-based.
fn center(n: usize) -> usize {
    (n / 2).max(1)
}

fn grid(spec: &FamilySpec, axes: &[&str]) -> DomainText {
    let n = spec.size;
    let mut d = DomainText::new(spec.family.name());
    for a in axes {
        d.actions.push(format!("move_{a}_dec"));
        d.actions.push(format!("move_{a}_inc"));
    }
    for a in axes {
        let cells = numbered(&format!("{a}_"), n);
        d.always.extend(one_hot(&cells));
        d.fluents.extend(cells);
    }
    d.inertial = d.fluents.clone();
    for a in axes {
        d.blocks.push(
            (2..=n)
                .flat_map(|k| {
                    [
                        format!("move_{a}_dec CAUSES {a}_{} IF {a}_{k}", k - 1),
                        format!("move_{a}_dec CAUSES !{a}_{k} IF {a}_{k}"),
                    ]
                })
                .collect(),
        );
        d.blocks.push(
            (1..n)
                .flat_map(|k| {
                    [
                        format!("move_{a}_inc CAUSES {a}_{} IF {a}_{k}", k + 1),
                        format!("move_{a}_inc CAUSES !{a}_{k} IF {a}_{k}"),
                    ]
                })
                .collect(),
        );
    }
    let c = center(n);
    let cell = |a: &str, k: usize| format!("{a}_{k}");
    let goal: Vec<String> = match spec.variant {
        Variant::Face => {
            d.initially = cell(axes[0], 1);
            std::iter::once(cell(axes[0], n))
                .chain(axes[1..].iter().map(|a| cell(a, c)))
                .collect()
        }
        Variant::Center => axes.iter().map(|a| cell(a, c)).collect(),
        _ => axes.iter().map(|a| cell(a, 1)).collect(),
    };
    d.goal = conj(&goal);
    d
}

/// Bits needed to count up to `i`.
fn width(i: usize) -> usize {
    (usize::BITS - i.leading_zeros()).max(1) as usize
}

fn omelette(i: usize) -> DomainText {
    let w = width(i);
    let bit = |b: usize, k: usize| format!("count_{b}_{k}");
    let equals = |b: usize, v: usize| -> String {
        conj(
            &(0..w)
                .map(|k| {
                    if v >> k & 1 == 1 {
                        bit(b, k)
                    } else {
                        format!("!{}", bit(b, k))
                    }
                })
                .collect::<Vec<_>>(),
        )
    };
    let set_to = |action: &str, b: usize, v: usize, cond: &str| -> Vec<String> {
        (0..w)
            .map(|k| {
                let lit = if v >> k & 1 == 1 {
                    bit(b, k)
                } else {
                    format!("!{}", bit(b, k))
                };
                format!("{action} CAUSES {lit} IF {cond}")
            })
            .collect()
    };

    let mut d = DomainText::new("OMELETTE");
    for b in 1..=2 {
        d.actions.push(format!("break_{b}"));
        d.actions.push(format!("discard_{b}"));
        d.actions.push(format!("pour_{b}"));
    }
    for b in 1..=2 {
        d.fluents.extend((0..w).map(|k| bit(b, k)));
        d.fluents.push(format!("spoiled_{b}"));
    }
    d.inertial = d.fluents.clone();
    if i + 1 < 1 << w {
        for b in 1..=2 {
            let values: Vec<String> = (0..=i).map(|v| paren(equals(b, v))).collect();
            d.always.push(disj(&values));
        }
    }

    for b in 1..=2usize {
        let o = 3 - b;
        let brk = format!("break_{b}");
        let mut block = vec![format!(
            "{brk} HAS PRECONDITIONS {}",
            disj(&(0..i).map(|v| paren(equals(b, v))).collect::<Vec<_>>())
        )];
        for v in 0..i {
            block.extend(set_to(&brk, b, v + 1, &equals(b, v)));
        }
        block.push(format!("{brk} CAUSES spoiled_{b} IF spoiled_{b}"));
        block.push(format!("{brk} POSSIBLY CHANGES spoiled_{b}"));
        d.blocks.push(block);

        let discard = format!("discard_{b}");
        let mut block: Vec<String> = (0..w).map(|k| format!("{discard} CAUSES !{}", bit(b, k))).collect();
        block.push(format!("{discard} CAUSES !spoiled_{b}"));
        d.blocks.push(block);

        let pour = format!("pour_{b}");
        let pairs: Vec<(usize, usize)> = (0..=i).flat_map(|u| (0..=i - u).map(move |v| (u, v))).collect();
        let mut block = vec![format!(
            "{pour} HAS PRECONDITIONS {}",
            disj(
                &pairs
                    .iter()
                    .map(|&(u, v)| paren(format!("{} & {}", equals(b, u), equals(o, v))))
                    .collect::<Vec<_>>()
            )
        )];
        for &(u, v) in &pairs {
            block.extend(set_to(&pour, o, u + v, &format!("{} & {}", equals(b, u), equals(o, v))));
        }
        block.extend((0..w).map(|k| format!("{pour} CAUSES !{}", bit(b, k))));
        block.push(format!("{pour} CAUSES spoiled_{o} IF spoiled_{b}"));
        block.push(format!("{pour} CAUSES !spoiled_{b}"));
        d.blocks.push(block);
    }

    d.initially = conj(
        &(1..=2)
            .flat_map(|b| {
                (0..w)
                    .map(move |k| format!("!count_{b}_{k}"))
                    .chain(std::iter::once(format!("!spoiled_{b}")))
            })
            .collect::<Vec<_>>(),
    );
    d.goal = disj(
        &(1..=2)
            .map(|b| paren(format!("{} & !spoiled_{b}", equals(b, i))))
            .collect::<Vec<_>>(),
    );
    d
}
