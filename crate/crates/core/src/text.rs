//! Line-oriented text formats for machines and semilinear sets.
//!
//! `#` starts a comment, each declaration sits on its own line and tokens
//! are separated by whitespace. Endmarkers are written `<` and `>`, λ is `@`.
//! Rendering lists states in id order, so `parse(render(x))` renders back to
//! the same text.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_traits::{PrimInt, Unsigned};

use crate::constructions::TuringMachine;
use crate::error::{Error, Result};
use crate::machine::{validate, Direction, Flavor, Move, MultiHeadAutomaton, StateId};
use crate::pcfa::{validate_system, Mode, PcfaRead, PcfaSystem};
use crate::semilinear::{LinearSet, NVector, SemilinearSet};
use crate::symbol::{Alphabet, LAMBDA_TOKEN, LEFT_END_TOKEN, RIGHT_END_TOKEN};
use crate::variants::{validate_partially_blind, CoincidencePartition};

/// Any of the three machine kinds a file can hold.
#[derive(Debug, Clone)]
pub enum MachineFile {
    Mhfa(MultiHeadAutomaton),
    Pcfa(PcfaSystem),
    Tm(TuringMachine),
}

impl MachineFile {
    pub fn kind(&self) -> &'static str {
        match self {
            MachineFile::Mhfa(_) => "mhfa",
            MachineFile::Pcfa(_) => "pcfa",
            MachineFile::Tm(_) => "tm",
        }
    }

    pub fn render(&self) -> String {
        match self {
            MachineFile::Mhfa(m) => render_mhfa(m),
            MachineFile::Pcfa(s) => render_pcfa(s),
            MachineFile::Tm(t) => render_tm(t),
        }
    }
}

struct Line<'a> {
    no: usize,
    tokens: Vec<&'a str>,
}

impl<'a> Line<'a> {
    fn key(&self) -> &'a str {
        self.tokens[0]
    }

    fn args(&self) -> &[&'a str] {
        &self.tokens[1..]
    }

    fn err(&self, token: &str, what: impl fmt::Display) -> Error {
        Error::parse(self.no, format!("`{token}`: {what}"))
    }

    /// The single argument of a one-value declaration.
    fn value(&self) -> Result<&'a str> {
        match self.tokens[..] {
            [_, v] => Ok(v),
            [k] => Err(self.err(k, "missing value")),
            [_, _, extra, ..] => Err(self.err(extra, "unexpected token")),
            [] => unreachable!("lines are never empty"),
        }
    }
}

fn strip_comment(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("")
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let tokens: Vec<&str> = strip_comment(raw).split_whitespace().collect();
            (!tokens.is_empty()).then_some(Line { no: i + 1, tokens })
        })
        .collect()
}

/// The message of a library error, without the variant prefix.
fn inner(e: Error) -> String {
    match e {
        Error::Usage(m) => m,
        other => other.to_string(),
    }
}

fn once<'l, 'a>(slot: &mut Option<&'l Line<'a>>, line: &'l Line<'a>) -> Result<()> {
    if let Some(prev) = slot {
        return Err(line.err(line.key(), format!("already declared at line {}", prev.no)));
    }
    *slot = Some(line);
    Ok(())
}

fn required<'l, 'a>(slot: Option<&'l Line<'a>>, key: &str, at: usize) -> Result<&'l Line<'a>> {
    slot.ok_or_else(|| Error::parse(at, format!("missing `{key}` declaration")))
}

fn positive(line: &Line) -> Result<usize> {
    let v = line.value()?;
    match v.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(line.err(v, "expected a positive integer")),
    }
}

/// Builds the alphabet one token at a time so errors point at the culprit.
fn alphabet_of(line: &Line, extra_reserved: impl Fn(&str) -> bool) -> Result<Alphabet> {
    let names = line.args();
    for (i, tok) in names.iter().enumerate() {
        if extra_reserved(tok) {
            return Err(line.err(tok, "reserved token"));
        }
        Alphabet::new(names[..=i].iter().copied()).map_err(|e| line.err(tok, inner(e)))?;
    }
    Alphabet::new(names.iter().copied()).map_err(|e| line.err(line.key(), inner(e)))
}

/// Collects names from repeatable declarations, rejecting duplicates.
fn declared<'a>(decls: &[&Line<'a>]) -> Result<Vec<&'a str>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for l in decls {
        for &tok in l.args() {
            if !seen.insert(tok) {
                return Err(l.err(tok, "declared twice"));
            }
            out.push(tok);
        }
    }
    Ok(out)
}

fn check_known(line: &Line, tok: &str, known: &HashSet<&str>, what: &str) -> Result<()> {
    if known.contains(tok) {
        Ok(())
    } else {
        Err(line.err(tok, format!("undeclared {what}")))
    }
}

/// Reads `machine NAME` and `kind K`, returning the remaining lines.
fn header<'l, 'a>(ls: &'l [Line<'a>]) -> Result<(&'a str, &'a str, usize, &'l [Line<'a>])> {
    let first = ls.first().ok_or_else(|| Error::parse(1, "empty file, expected `machine NAME`"))?;
    if first.key() != "machine" {
        return Err(first.err(first.key(), "expected `machine NAME`"));
    }
    let name = first.value()?;
    let second = ls.get(1).ok_or_else(|| Error::parse(first.no + 1, "missing `kind` line"))?;
    if second.key() != "kind" {
        return Err(second.err(second.key(), "expected `kind mhfa|pcfa|tm`"));
    }
    Ok((name, second.value()?, second.no, &ls[2..]))
}

/// Parses and validates a machine file of any kind.
pub fn parse_machine_file(text: &str) -> Result<MachineFile> {
    let ls = lines(text);
    let (name, kind, at, body) = header(&ls)?;
    match kind {
        "mhfa" => parse_mhfa_body(name, at, body).map(MachineFile::Mhfa),
        "pcfa" => parse_pcfa_body(name, at, body).map(MachineFile::Pcfa),
        "tm" => parse_tm_body(name, at, body).map(MachineFile::Tm),
        other => Err(Error::parse(at, format!("`{other}`: unknown kind, expected mhfa, pcfa or tm"))),
    }
}

fn expect_kind(file: MachineFile, want: &str) -> Error {
    Error::usage(format!("expected a {want} file, found kind {}", file.kind()))
}

pub fn parse_mhfa(text: &str) -> Result<MultiHeadAutomaton> {
    match parse_machine_file(text)? {
        MachineFile::Mhfa(m) => Ok(m),
        other => Err(expect_kind(other, "mhfa")),
    }
}

pub fn parse_pcfa(text: &str) -> Result<PcfaSystem> {
    match parse_machine_file(text)? {
        MachineFile::Pcfa(s) => Ok(s),
        other => Err(expect_kind(other, "pcfa")),
    }
}

pub fn parse_tm(text: &str) -> Result<TuringMachine> {
    match parse_machine_file(text)? {
        MachineFile::Tm(t) => Ok(t),
        other => Err(expect_kind(other, "tm")),
    }
}

fn parse_mhfa_body(name: &str, at: usize, body: &[Line]) -> Result<MultiHeadAutomaton> {
    let (mut direction, mut heads, mut flavor, mut alphabet, mut initial) = (None, None, None, None, None);
    let (mut states, mut accepting, mut trans) = (Vec::new(), Vec::new(), Vec::new());
    for l in body {
        match l.key() {
            "direction" => once(&mut direction, l)?,
            "heads" => once(&mut heads, l)?,
            "flavor" => once(&mut flavor, l)?,
            "alphabet" => once(&mut alphabet, l)?,
            "initial" => once(&mut initial, l)?,
            "states" => states.push(l),
            "accepting" => accepting.push(l),
            "trans" => trans.push(l),
            other => return Err(l.err(other, "unknown declaration in an mhfa file")),
        }
    }
    let dl = required(direction, "direction", at)?;
    let direction = match dl.value()? {
        "one-way" => Direction::OneWay,
        "two-way" => Direction::TwoWay,
        v => return Err(dl.err(v, "expected one-way or two-way")),
    };
    let k = positive(required(heads, "heads", at)?)?;
    let flavor = match flavor {
        None => Flavor::Plain,
        Some(l) => match l.args() {
            ["plain"] => Flavor::Plain,
            ["sensing"] => Flavor::Sensing,
            ["partially-blind", h] => match h.parse::<usize>() {
                Ok(h) if (1..=k).contains(&h) => Flavor::PartiallyBlind { designated: h - 1 },
                _ => return Err(l.err(h, format!("designated head must be in 1..={k}"))),
            },
            ["partially-blind"] => return Err(l.err("partially-blind", "missing designated head")),
            [v, ..] => return Err(l.err(v, "expected plain, sensing or partially-blind HEAD")),
            [] => return Err(l.err("flavor", "missing value")),
        },
    };
    let alphabet = alphabet_of(required(alphabet, "alphabet", at)?, |_| false)?;
    if states.is_empty() {
        return Err(Error::parse(at, "missing `states` declaration"));
    }
    let names = declared(&states)?;
    let known: HashSet<&str> = names.iter().copied().collect();

    let mut b = MultiHeadAutomaton::builder(name, alphabet.clone(), k, direction);
    b.flavor(flavor);
    for n in &names {
        b.state(n);
    }
    let il = required(initial, "initial", at)?;
    let init = il.value()?;
    check_known(il, init, &known, "state")?;
    b.initial(init);
    for l in &accepting {
        for &s in l.args() {
            check_known(l, s, &known, "state")?;
            b.accepting(s);
        }
    }
    for l in &trans {
        let (from, syms, part, to, moves) = match l.tokens[..] {
            [_, from, syms, "->", to, moves] => (from, syms, None, to, moves),
            [_, from, syms, part, "->", to, moves] => (from, syms, Some(part), to, moves),
            _ => return Err(l.err("trans", "expected `trans STATE s1,...,sk -> STATE d1,...,dk`")),
        };
        check_known(l, from, &known, "state")?;
        check_known(l, to, &known, "state")?;
        let read = syms
            .split(',')
            .map(|s| alphabet.letter(s).map_err(|e| l.err(s, inner(e))))
            .collect::<Result<Vec<_>>>()?;
        if read.len() != k {
            return Err(l.err(syms, format!("{} symbols for {k} heads", read.len())));
        }
        let partition = match (part, flavor) {
            (Some(p), Flavor::Sensing) => Some(CoincidencePartition::parse(k, p).map_err(|e| l.err(p, inner(e)))?),
            (Some(p), _) => return Err(l.err(p, "partitions are only allowed on sensing machines")),
            (None, Flavor::Sensing) => return Err(l.err("->", "sensing transitions need a coincidence partition")),
            (None, _) => None,
        };
        let mv = moves
            .split(',')
            .map(|d| d.parse::<i64>().ok().and_then(Move::from_delta).ok_or_else(|| l.err(d, "expected -1, 0 or 1")))
            .collect::<Result<Vec<_>>>()?;
        if mv.len() != k {
            return Err(l.err(moves, format!("{} moves for {k} heads", mv.len())));
        }
        b.transition(from, &read, partition, to, &mv).map_err(|e| l.err("trans", inner(e)))?;
    }
    let m = b.build().map_err(|e| Error::parse(at, inner(e)))?;
    let mut problems: Vec<String> = validate(&m).iter().map(|d| d.to_string()).collect();
    if let Flavor::PartiallyBlind { designated } = flavor {
        if !validate_partially_blind(&m, designated) {
            problems.push(format!("a head other than {} distinguishes input symbols", designated + 1));
        }
    }
    if problems.is_empty() {
        Ok(m)
    } else {
        Err(Error::Validation(problems))
    }
}

pub fn render_mhfa(m: &MultiHeadAutomaton) -> String {
    let mut out = String::new();
    let flavor = match m.flavor() {
        Flavor::Plain => "plain".to_string(),
        Flavor::Sensing => "sensing".to_string(),
        Flavor::PartiallyBlind { designated } => format!("partially-blind {}", designated + 1),
    };
    let _ = writeln!(out, "machine {}\nkind mhfa", m.name());
    let _ = writeln!(out, "direction {}\nheads {}\nflavor {flavor}", m.direction(), m.heads());
    push_list(&mut out, "alphabet", m.alphabet().names().iter().map(String::as_str));
    push_list(&mut out, "states", m.state_names().iter().map(String::as_str));
    let _ = writeln!(out, "initial {}", m.state_name(m.initial()));
    push_list(&mut out, "accepting", m.accepting().iter().map(|&s| m.state_name(s)));
    for t in m.transitions() {
        let read: Vec<&str> = t.read.iter().map(|&l| m.alphabet().letter_name(l)).collect();
        let moves: Vec<String> = t.moves.iter().map(|mv| mv.delta().to_string()).collect();
        let part = t.partition.map(|p| format!(" {p}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "trans {} {}{part} -> {} {}",
            m.state_name(t.from),
            read.join(","),
            m.state_name(t.to),
            moves.join(",")
        );
    }
    out
}

fn push_list<'a>(out: &mut String, key: &str, items: impl Iterator<Item = &'a str>) {
    out.push_str(key);
    for it in items {
        out.push(' ');
        out.push_str(it);
    }
    out.push('\n');
}

/// `q` followed by digits names a query state in pcfa files.
fn is_query_token(tok: &str) -> bool {
    tok.strip_prefix('q').is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

fn parse_pcfa_body(name: &str, at: usize, body: &[Line]) -> Result<PcfaSystem> {
    let (mut alphabet, mut mode, mut centralized, mut components) = (None, None, None, None);
    let mut shared = Vec::new();
    let mut blocks: Vec<(&Line, Vec<&Line>)> = Vec::new();
    for l in body {
        if let Some((_, block)) = blocks.last_mut() {
            match l.key() {
                "component" => blocks.push((l, Vec::new())),
                "states" | "initial" | "accepting" | "trans" => block.push(l),
                other => return Err(l.err(other, "not allowed inside a component block")),
            }
            continue;
        }
        match l.key() {
            "alphabet" => once(&mut alphabet, l)?,
            "mode" => once(&mut mode, l)?,
            "centralized" => once(&mut centralized, l)?,
            "components" => once(&mut components, l)?,
            "states" => shared.push(l),
            "component" => blocks.push((l, Vec::new())),
            other => return Err(l.err(other, "unknown declaration in a pcfa file")),
        }
    }
    let alphabet = alphabet_of(required(alphabet, "alphabet", at)?, is_query_token)?;
    let ml = required(mode, "mode", at)?;
    let mode = match ml.value()? {
        "returning" => Mode::Returning,
        "non-returning" => Mode::NonReturning,
        v => return Err(ml.err(v, "expected returning or non-returning")),
    };
    let cl = required(centralized, "centralized", at)?;
    let centralized = match cl.value()? {
        "true" => true,
        "false" => false,
        v => return Err(cl.err(v, "expected true or false")),
    };
    let k = positive(required(components, "components", at)?)?;

    let mut b = PcfaSystem::builder(name, alphabet.clone(), k, mode, centralized);
    // The top-level list fixes the order of the shared state namespace.
    for n in declared(&shared)? {
        b.declare(n);
    }
    let mut seen = vec![false; k];
    for (head, lines) in &blocks {
        let v = head.value()?;
        let i = match v.parse::<usize>() {
            Ok(i) if (1..=k).contains(&i) => i - 1,
            _ => return Err(head.err(v, format!("component index must be in 1..={k}"))),
        };
        if std::mem::replace(&mut seen[i], true) {
            return Err(head.err(v, "component declared twice"));
        }
        let states: Vec<&Line> = lines.iter().copied().filter(|l| l.key() == "states").collect();
        let names = declared(&states)?;
        let known: HashSet<&str> = names.iter().copied().collect();
        for n in &names {
            b.state(i, n).map_err(|e| head.err(v, inner(e)))?;
        }
        let mut initial = None;
        for l in lines {
            match l.key() {
                "initial" => {
                    once(&mut initial, l)?;
                    let s = l.value()?;
                    check_known(l, s, &known, "state")?;
                    b.initial(i, s).map_err(|e| l.err(s, inner(e)))?;
                }
                "accepting" => {
                    for &s in l.args() {
                        check_known(l, s, &known, "state")?;
                        b.accepting(i, s).map_err(|e| l.err(s, inner(e)))?;
                    }
                }
                "trans" => {
                    let [_, from, sym, "->", to] = l.tokens[..] else {
                        return Err(l.err("trans", "expected `trans STATE SYM -> STATE`"));
                    };
                    check_known(l, from, &known, "state")?;
                    check_known(l, to, &known, "state")?;
                    let read = match sym {
                        LAMBDA_TOKEN => PcfaRead::Lambda,
                        RIGHT_END_TOKEN => PcfaRead::End,
                        _ => PcfaRead::Sym(alphabet.lookup(sym).map_err(|e| l.err(sym, inner(e)))?),
                    };
                    b.transition(i, from, read, to).map_err(|e| l.err("trans", inner(e)))?;
                }
                _ => {}
            }
        }
        if initial.is_none() {
            return Err(head.err(v, "component has no `initial` declaration"));
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::parse(at, format!("missing `component {}` block", i + 1)));
    }
    let sys = b.build().map_err(|e| Error::parse(at, inner(e)))?;
    let problems = validate_system(&sys);
    if problems.is_empty() {
        Ok(sys)
    } else {
        Err(Error::Validation(problems))
    }
}

fn pcfa_read_name(sys: &PcfaSystem, read: PcfaRead) -> &str {
    match read {
        PcfaRead::Sym(s) => sys.alphabet().name(s),
        PcfaRead::Lambda => LAMBDA_TOKEN,
        PcfaRead::End => RIGHT_END_TOKEN,
    }
}

pub fn render_pcfa(sys: &PcfaSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "machine {}\nkind pcfa", sys.name());
    push_list(&mut out, "alphabet", sys.alphabet().names().iter().map(String::as_str));
    let _ = writeln!(out, "mode {}\ncentralized {}\ncomponents {}", sys.mode(), sys.is_centralized(), sys.degree());
    let ids = (0..sys.state_names().len() as u32).map(StateId);
    push_list(&mut out, "states", ids.filter(|&s| !sys.is_query(s)).map(|s| sys.state_name(s)));
    for (i, c) in sys.components().iter().enumerate() {
        let _ = writeln!(out, "component {}", i + 1);
        push_list(&mut out, "states", c.states.iter().map(|&s| sys.state_name(s)));
        let _ = writeln!(out, "initial {}", sys.state_name(c.initial));
        push_list(&mut out, "accepting", c.accepting.iter().map(|&s| sys.state_name(s)));
        for (&(from, read), targets) in &c.transitions {
            for &to in targets {
                let _ = writeln!(
                    out,
                    "trans {} {} -> {}",
                    sys.state_name(from),
                    pcfa_read_name(sys, read),
                    sys.state_name(to)
                );
            }
        }
    }
    out
}

fn tm_names<'a>(decls: &[&Line<'a>]) -> Result<Vec<&'a str>> {
    let names = declared(decls)?;
    for l in decls {
        for &tok in l.args() {
            if tok == "$" || tok == LEFT_END_TOKEN || tok == RIGHT_END_TOKEN || tok == LAMBDA_TOKEN || tok.contains(',') {
                return Err(l.err(tok, "reserved token"));
            }
        }
    }
    Ok(names)
}

fn parse_tm_body(name: &str, at: usize, body: &[Line]) -> Result<TuringMachine> {
    let (mut tape, mut blank, mut input, mut initial) = (None, None, None, None);
    let (mut states, mut accepting, mut trans) = (Vec::new(), Vec::new(), Vec::new());
    for l in body {
        match l.key() {
            "tape-alphabet" => once(&mut tape, l)?,
            "blank" => once(&mut blank, l)?,
            "input-alphabet" => once(&mut input, l)?,
            "initial" => once(&mut initial, l)?,
            "states" => states.push(l),
            "accepting" => accepting.push(l),
            "trans" => trans.push(l),
            other => return Err(l.err(other, "unknown declaration in a tm file")),
        }
    }
    if states.is_empty() {
        return Err(Error::parse(at, "missing `states` declaration"));
    }
    let state_names = tm_names(&states)?;
    let tl = required(tape, "tape-alphabet", at)?;
    let tape_names = tm_names(&[tl])?;
    let known_states: HashSet<&str> = state_names.iter().copied().collect();
    let known_tape: HashSet<&str> = tape_names.iter().copied().collect();
    if let Some(s) = tape_names.iter().find(|t| known_states.contains(*t)) {
        return Err(tl.err(s, "also declared as a state"));
    }
    let bl = required(blank, "blank", at)?;
    let blank = bl.value()?;
    check_known(bl, blank, &known_tape, "tape symbol")?;
    let il = required(input, "input-alphabet", at)?;
    for &t in il.args() {
        check_known(il, t, &known_tape, "tape symbol")?;
        if t == blank {
            return Err(il.err(t, "the blank is not an input symbol"));
        }
    }
    let init_line = required(initial, "initial", at)?;
    let init = init_line.value()?;
    check_known(init_line, init, &known_states, "state")?;
    let mut acc = Vec::new();
    for l in &accepting {
        for &s in l.args() {
            check_known(l, s, &known_states, "state")?;
            acc.push(s);
        }
    }
    let mut tm = TuringMachine::new(name, &state_names, &tape_names, blank, il.args(), init, &acc)
        .map_err(|e| Error::parse(at, inner(e)))?;
    for l in &trans {
        let [_, from, read, "->", to, write, dir] = l.tokens[..] else {
            return Err(l.err("trans", "expected `trans STATE READ -> STATE WRITE L|N|R`"));
        };
        check_known(l, from, &known_states, "state")?;
        check_known(l, read, &known_tape, "tape symbol")?;
        check_known(l, to, &known_states, "state")?;
        check_known(l, write, &known_tape, "tape symbol")?;
        let dir = match dir {
            "L" => Move::Left,
            "N" => Move::Stay,
            "R" => Move::Right,
            d => return Err(l.err(d, "expected L, N or R")),
        };
        tm.transition(from, read, to, write, dir).map_err(|e| l.err("trans", inner(e)))?;
    }
    Ok(tm)
}

pub fn render_tm(tm: &TuringMachine) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "machine {}\nkind tm", tm.name());
    push_list(&mut out, "states", tm.states().iter().map(String::as_str));
    push_list(&mut out, "tape-alphabet", tm.tape_alphabet().iter().map(String::as_str));
    let _ = writeln!(out, "blank {}", tm.tape_name(tm.blank()));
    push_list(&mut out, "input-alphabet", tm.input_symbols().iter().map(|&t| tm.tape_name(t)));
    let _ = writeln!(out, "initial {}", tm.state_name(tm.initial()));
    push_list(&mut out, "accepting", tm.accepting().iter().map(|&s| tm.state_name(s)));
    for ((s, t), a) in tm.transitions() {
        let dir = match a.dir {
            Move::Left => "L",
            Move::Stay => "N",
            Move::Right => "R",
        };
        let _ = writeln!(
            out,
            "trans {} {} -> {} {} {dir}",
            tm.state_name(s),
            tm.tape_name(t),
            tm.state_name(a.state),
            tm.tape_name(a.write)
        );
    }
    out
}

/// Parses `dimension N` and `linear base v... ; periods p... | p... | ...`
/// lines. The dimension line is optional unless the set has no components.
pub fn parse_semilinear<T>(text: &str) -> Result<SemilinearSet<T>>
where
    T: PrimInt + Unsigned + FromStr,
{
    let spaced: Vec<(usize, String)> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, strip_comment(raw).replace(';', " ; ").replace('|', " | ")))
        .collect();
    let ls: Vec<Line> = spaced
        .iter()
        .filter_map(|(no, s)| {
            let tokens: Vec<&str> = s.split_whitespace().collect();
            (!tokens.is_empty()).then_some(Line { no: *no, tokens })
        })
        .collect();
    let mut dim_line = None;
    let mut comps = Vec::new();
    for l in &ls {
        match l.key() {
            "dimension" => once(&mut dim_line, l)?,
            "linear" => comps.push(l),
            other => return Err(l.err(other, "expected `dimension` or `linear`")),
        }
    }
    let mut dim = match dim_line {
        Some(l) => {
            let v = l.value()?;
            Some(v.parse::<usize>().map_err(|_| l.err(v, "expected a dimension"))?)
        }
        None => None,
    };
    let number = |l: &Line, tok: &str| T::from_str(tok).map_err(|_| l.err(tok, "expected a non-negative integer"));
    let mut set_parts = Vec::new();
    for l in comps {
        let args = l.args();
        if args.first() != Some(&"base") {
            return Err(l.err(args.first().copied().unwrap_or("linear"), "expected `base`"));
        }
        let split = args.iter().position(|&t| t == ";").unwrap_or(args.len());
        let base = NVector(args[1..split].iter().map(|t| number(l, t)).collect::<Result<Vec<T>>>()?);
        let d = *dim.get_or_insert(base.dim());
        if base.dim() != d {
            return Err(l.err("base", format!("{} entries, expected {d}", base.dim())));
        }
        let mut periods = Vec::new();
        if split < args.len() {
            let rest = &args[split + 1..];
            if rest.first() != Some(&"periods") {
                return Err(l.err(rest.first().copied().unwrap_or(";"), "expected `periods`"));
            }
            if rest.len() > 1 {
                for group in rest[1..].split(|&t| t == "|") {
                    if group.len() != d {
                        let tok = group.first().copied().unwrap_or("|");
                        return Err(l.err(tok, format!("period with {} entries, expected {d}", group.len())));
                    }
                    periods.push(NVector(group.iter().map(|t| number(l, t)).collect::<Result<Vec<T>>>()?));
                }
            }
        }
        set_parts.push(LinearSet::new(base, periods).map_err(|e| l.err("linear", inner(e)))?);
    }
    let dim = dim.ok_or_else(|| Error::parse(1, "an empty set needs a `dimension` line"))?;
    SemilinearSet::new(dim, set_parts).map_err(|e| Error::parse(1, inner(e)))
}

pub fn render_semilinear<T: fmt::Display>(s: &SemilinearSet<T>) -> String
where
    T: PrimInt + Unsigned,
{
    let join = |v: &NVector<T>| v.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("dimension {}\n", s.dim());
    for l in s.components() {
        let periods: Vec<String> = l.periods().iter().map(join).collect();
        let _ = write!(out, "linear base {} ; periods", join(l.base()));
        if !periods.is_empty() {
            let _ = write!(out, " {}", periods.join(" | "));
        }
        out.push('\n');
    }
    out
}
