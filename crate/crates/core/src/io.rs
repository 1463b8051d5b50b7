//! Plain-text formats for elections, graphs, packing instances and interval
//! selection instances.
//!
//! Every format ignores blank lines and `#` comments, and has one canonical
//! rendering: `write(parse(text))` canonicalizes and `parse(write(x))`
//! gives `x` back.
//!
//! Election file:
//!
//! ```text
//! candidates: a b c d
//! axis: a c b d
//! r: 2
//! distinguished: a
//! k: 1
//! budget: 1
//! spoilers: d
//! [registered]
//! 2: a > b > c > d
//! [unregistered]
//! 1: c > a > b > d
//! ```
//!
//! `budget` and `spoilers` are optional. Votes are full rankings with a
//! multiplicity; entries are kept in file order without merging.

use std::fmt::Write as _;

use crate::control::{AcInstance, AvInstance, ControlInstance, DcInstance, DvInstance, Problem};
use crate::election::{CandidateId, Election, Vote, VoteMultiset};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mrsp::MrspInstance;
use crate::peaked::Axis;
use crate::reductions::VisInstance;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    body: &'a str,
}

impl<'a> Line<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn tokens(&self, from: usize) -> Vec<Token<'a>> {
        let mut out = Vec::new();
        let rest = &self.body[from..];
        let mut start = None;
        for (i, ch) in rest.char_indices().chain(std::iter::once((rest.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push(Token {
                        text: &rest[s..i],
                        column: from + s + 1,
                    });
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        out
    }
}

/// Non-blank lines with comments removed.
fn content_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim_end();
        (!body.trim().is_empty()).then_some(Line { number: i + 1, body })
    })
}

fn number<T: std::str::FromStr>(line: &Line, tok: &Token, what: &str) -> Result<T> {
    tok.text
        .parse()
        .map_err(|_| line.error(tok.column, format!("expected {what}, found `{}`", tok.text)))
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(|c: char| c.is_whitespace() || matches!(c, '>' | ':' | '#' | '[' | ']'))
}

/// An election together with everything the four control problems need.
#[derive(Clone, Debug)]
pub struct ElectionFile {
    pub election: Election,
    pub axis: Axis,
    pub k: usize,
    pub budget: Option<usize>,
    pub spoilers: Vec<CandidateId>,
    pub unregistered: VoteMultiset,
}

#[derive(Default)]
struct Header {
    candidates: Option<Vec<String>>,
    axis: Option<(usize, Vec<String>)>,
    r: Option<usize>,
    distinguished: Option<(usize, String)>,
    k: Option<usize>,
    budget: Option<usize>,
    spoilers: Option<(usize, Vec<String>)>,
}

impl ElectionFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut header = Header::default();
        let mut section: Option<bool> = None; // Some(true) = registered
        let mut registered = VoteMultiset::new();
        let mut unregistered = VoteMultiset::new();
        let mut ids: Option<std::collections::HashMap<String, CandidateId>> = None;
        let mut last_line = 0;
        for line in content_lines(text) {
            last_line = line.number;
            let trimmed = line.body.trim();
            let indent = line.body.len() - line.body.trim_start().len();
            if trimmed.starts_with('[') {
                section = match trimmed {
                    "[registered]" => Some(true),
                    "[unregistered]" => Some(false),
                    _ => return Err(line.error(indent + 1, format!("unknown section `{trimmed}`"))),
                };
                if ids.is_none() {
                    let names = header
                        .candidates
                        .clone()
                        .ok_or_else(|| line.error(1, "section before the `candidates:` header"))?;
                    ids = Some(names.into_iter().enumerate().map(|(i, n)| (n, i)).collect());
                }
                continue;
            }
            let colon = line
                .body
                .find(':')
                .ok_or_else(|| line.error(indent + 1, "expected `key: value`"))?;
            let key = line.body[..colon].trim();
            match section {
                None => Self::header_line(&line, key, colon, &mut header)?,
                Some(reg) => {
                    let ids = ids.as_ref().expect("set when a section opens");
                    let mult_tok = Token {
                        text: key,
                        column: indent + 1,
                    };
                    let mult: usize = number(&line, &mult_tok, "a multiplicity")?;
                    if mult == 0 {
                        return Err(line.error(indent + 1, "multiplicity must be positive"));
                    }
                    let vote = Self::vote(&line, colon + 1, ids)?;
                    if reg {
                        registered.push(vote, mult);
                    } else {
                        unregistered.push(vote, mult);
                    }
                }
            }
        }
        let missing = |what: &str| Error::Parse {
            line: last_line.max(1),
            column: 1,
            message: format!("missing `{what}:` header"),
        };
        let names = header.candidates.ok_or_else(|| missing("candidates"))?;
        let m = names.len();
        let lookup = |pos: (usize, usize), name: &str| -> Result<CandidateId> {
            names.iter().position(|n| n == name).ok_or_else(|| Error::Parse {
                line: pos.0,
                column: pos.1,
                message: format!("unknown candidate `{name}`"),
            })
        };
        let (axis_line, axis_names) = header.axis.ok_or_else(|| missing("axis"))?;
        let order = axis_names
            .iter()
            .map(|n| lookup((axis_line, 1), n))
            .collect::<Result<Vec<_>>>()?;
        if order.len() != m {
            return Err(Error::Parse {
                line: axis_line,
                column: 1,
                message: format!("axis lists {} candidates, expected {m}", order.len()),
            });
        }
        let axis = Axis::new(order).map_err(|e| Error::Parse {
            line: axis_line,
            column: 1,
            message: e.to_string(),
        })?;
        let r = header.r.ok_or_else(|| missing("r"))?;
        let (p_line, p_name) = header.distinguished.ok_or_else(|| missing("distinguished"))?;
        let p = lookup((p_line, 1), &p_name)?;
        let k = header.k.ok_or_else(|| missing("k"))?;
        let spoilers = match header.spoilers {
            Some((l, list)) => list.iter().map(|n| lookup((l, 1), n)).collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        let election = Election::new(names, p, r, registered)?;
        Ok(ElectionFile {
            election,
            axis,
            k,
            budget: header.budget,
            spoilers,
            unregistered,
        })
    }

    fn header_line(line: &Line, key: &str, colon: usize, h: &mut Header) -> Result<()> {
        let toks = line.tokens(colon + 1);
        let names = |toks: &[Token]| -> Result<Vec<String>> {
            toks.iter()
                .map(|t| {
                    if valid_name(t.text) {
                        Ok(t.text.to_string())
                    } else {
                        Err(line.error(t.column, format!("invalid candidate name `{}`", t.text)))
                    }
                })
                .collect()
        };
        let single = |toks: &[Token]| -> Result<usize> {
            match toks {
                [t] => number(line, t, "a non-negative integer"),
                _ => Err(line.error(colon + 2, format!("`{key}` takes one integer"))),
            }
        };
        let dup = || line.error(1, format!("duplicate `{key}` header"));
        match key {
            "candidates" => {
                if h.candidates.is_some() {
                    return Err(dup());
                }
                let list = names(&toks)?;
                let mut seen = std::collections::HashSet::new();
                if let Some(t) = toks.iter().find(|t| !seen.insert(t.text)) {
                    return Err(line.error(t.column, format!("candidate `{}` listed twice", t.text)));
                }
                h.candidates = Some(list);
            }
            "axis" => {
                if h.axis.is_some() {
                    return Err(dup());
                }
                h.axis = Some((line.number, names(&toks)?));
            }
            "r" => {
                if h.r.replace(single(&toks)?).is_some() {
                    return Err(dup());
                }
            }
            "k" => {
                if h.k.replace(single(&toks)?).is_some() {
                    return Err(dup());
                }
            }
            "budget" => {
                if h.budget.replace(single(&toks)?).is_some() {
                    return Err(dup());
                }
            }
            "distinguished" => {
                let list = names(&toks)?;
                if list.len() != 1 {
                    return Err(line.error(colon + 2, "`distinguished` takes one candidate"));
                }
                if h.distinguished.replace((line.number, list[0].clone())).is_some() {
                    return Err(dup());
                }
            }
            "spoilers" => {
                if h.spoilers.replace((line.number, names(&toks)?)).is_some() {
                    return Err(dup());
                }
            }
            _ => {
                let indent = line.body.len() - line.body.trim_start().len();
                return Err(line.error(indent + 1, format!("unknown header `{key}`")));
            }
        }
        Ok(())
    }

    fn vote(line: &Line, from: usize, ids: &std::collections::HashMap<String, CandidateId>) -> Result<Vote> {
        let mut order = Vec::with_capacity(ids.len());
        let mut expect_name = true;
        for t in line.tokens(from) {
            if expect_name {
                let c = ids
                    .get(t.text)
                    .ok_or_else(|| line.error(t.column, format!("unknown candidate `{}`", t.text)))?;
                order.push(*c);
            } else if t.text != ">" {
                return Err(line.error(t.column, format!("expected `>`, found `{}`", t.text)));
            }
            expect_name = !expect_name;
        }
        if expect_name {
            return Err(line.error(line.body.len() + 1, "vote ends with `>` or is empty"));
        }
        Vote::new(order, ids.len()).map_err(|e| line.error(from + 1, e.to_string()))
    }

    pub fn write(&self) -> String {
        let e = &self.election;
        let names = |cs: &mut dyn Iterator<Item = CandidateId>| -> String {
            cs.map(|c| e.name(c)).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        let _ = writeln!(out, "candidates: {}", e.names().join(" "));
        let _ = writeln!(out, "axis: {}", names(&mut self.axis.order().iter().copied()));
        let _ = writeln!(out, "r: {}", e.r());
        let _ = writeln!(out, "distinguished: {}", e.name(e.distinguished()));
        let _ = writeln!(out, "k: {}", self.k);
        if let Some(b) = self.budget {
            let _ = writeln!(out, "budget: {b}");
        }
        if !self.spoilers.is_empty() {
            let _ = writeln!(out, "spoilers: {}", names(&mut self.spoilers.iter().copied()));
        }
        for (title, votes) in [("registered", e.registered()), ("unregistered", &self.unregistered)] {
            let _ = writeln!(out, "[{title}]");
            for (vote, mult) in votes.entries() {
                let ranking: Vec<&str> = vote.order().iter().map(|&c| e.name(c)).collect();
                let _ = writeln!(out, "{mult}: {}", ranking.join(" > "));
            }
        }
        out
    }

    pub fn from_instance(inst: &ControlInstance) -> Self {
        let (unregistered, spoilers) = match inst {
            ControlInstance::Av(i) => (i.unregistered.clone(), Vec::new()),
            ControlInstance::Ac(i) => (VoteMultiset::new(), i.spoilers.clone()),
            _ => (VoteMultiset::new(), Vec::new()),
        };
        ElectionFile {
            election: inst.election().clone(),
            axis: inst.axis().clone(),
            k: inst.k(),
            budget: Some(inst.budget()),
            spoilers,
            unregistered,
        }
    }

    /// The control instance for `problem`; `budget` overrides the file's.
    pub fn instance(&self, problem: Problem, budget: Option<usize>) -> Result<ControlInstance> {
        let budget = budget
            .or(self.budget)
            .ok_or_else(|| Error::InvalidInput("no budget given in the file or on the command line".into()))?;
        let election = self.election.clone();
        let axis = self.axis.clone();
        let k = self.k;
        Ok(match problem {
            Problem::Av => ControlInstance::Av(AvInstance {
                election,
                unregistered: self.unregistered.clone(),
                budget,
                axis,
                k,
            }),
            Problem::Dv => ControlInstance::Dv(DvInstance {
                election,
                budget,
                axis,
                k,
            }),
            Problem::Ac => ControlInstance::Ac(AcInstance {
                election,
                spoilers: self.spoilers.clone(),
                budget,
                axis,
                k,
            }),
            Problem::Dc => ControlInstance::Dc(DcInstance {
                election,
                budget,
                axis,
                k,
            }),
        })
    }
}

fn expect_header<'a>(lines: &mut impl Iterator<Item = Line<'a>>, word: &str, fields: usize) -> Result<(Line<'a>, Vec<usize>)> {
    let line = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: format!("empty input, expected `{word}` header"),
    })?;
    let toks = line.tokens(0);
    if toks.first().map(|t| t.text) != Some(word) || toks.len() != fields + 1 {
        return Err(line.error(1, format!("expected `{word}` followed by {fields} integers")));
    }
    let nums = toks[1..]
        .iter()
        .map(|t| number(&line, t, "a non-negative integer"))
        .collect::<Result<Vec<usize>>>()?;
    Ok((line, nums))
}

fn keyword_numbers<'a>(line: &Line<'a>, word: &str) -> Result<Vec<u64>> {
    let toks = line.tokens(0);
    if toks.first().map(|t| t.text) != Some(word) {
        return Err(line.error(1, format!("expected a `{word}` line")));
    }
    toks[1..].iter().map(|t| number(line, t, "a non-negative integer")).collect()
}

/// `graph n m` followed by `m` lines `e u v` (0-based ids).
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (head, nums) = expect_header(&mut lines, "graph", 2)?;
    let (n, m) = (nums[0], nums[1]);
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let e = keyword_numbers(&line, "e")?;
        if e.len() != 2 {
            return Err(line.error(1, "an edge line is `e u v`"));
        }
        edges.push((e[0] as usize, e[1] as usize));
    }
    if edges.len() != m {
        return Err(head.error(1, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("graph {} {}\n", g.n(), g.num_edges());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

/// `mrsp <universe> <r> <target>`, one `cap` line with a capacity per
/// element, then one `set` line per set.
pub fn parse_mrsp(text: &str) -> Result<MrspInstance> {
    let mut lines = content_lines(text);
    let (head, nums) = expect_header(&mut lines, "mrsp", 3)?;
    let cap_line = lines
        .next()
        .ok_or_else(|| head.error(1, "missing `cap` line"))?;
    let capacity: Vec<usize> = keyword_numbers(&cap_line, "cap")?
        .into_iter()
        .map(|c| c as usize)
        .collect();
    let mut sets = Vec::new();
    for line in lines {
        sets.push(keyword_numbers(&line, "set")?.into_iter().map(|x| x as usize).collect());
    }
    MrspInstance::new(nums[0], nums[1], capacity, sets, nums[2])
}

pub fn write_mrsp(inst: &MrspInstance) -> String {
    let join = |xs: &[usize]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!("mrsp {} {} {}\n", inst.universe(), inst.r(), inst.target());
    let caps = join(inst.capacity());
    let _ = writeln!(out, "cap{}{caps}", if caps.is_empty() { "" } else { " " });
    for s in inst.sets() {
        let body = join(s);
        let _ = writeln!(out, "set{}{body}", if body.is_empty() { "" } else { " " });
    }
    out
}

/// `vis <n>` followed by `n` lines `group l1 [l2 [l3]]`, each `l` the left
/// end of a 4-integer interval.
pub fn parse_vis(text: &str) -> Result<VisInstance> {
    let mut lines = content_lines(text);
    let (head, nums) = expect_header(&mut lines, "vis", 1)?;
    let mut groups = Vec::new();
    for line in lines {
        groups.push(keyword_numbers(&line, "group")?);
    }
    if groups.len() != nums[0] {
        return Err(head.error(1, format!("header announces {} groups, found {}", nums[0], groups.len())));
    }
    VisInstance::new(groups)
}

pub fn write_vis(vis: &VisInstance) -> String {
    let mut out = format!("vis {}\n", vis.len());
    for g in vis.groups() {
        let body: Vec<String> = g.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "group {}", body.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "candidates: a b c
axis: a b c
r: 2
distinguished: a
k: 2
[registered]
1: a > b > c
1: a > c > b
1: c > a > b
[unregistered]
";

    #[test]
    fn small_election_round_trips() {
        let f = ElectionFile::parse(EXAMPLE).unwrap();
        assert_eq!(f.election.unique_winner(), Some(0));
        assert_eq!(f.write(), EXAMPLE);
    }

    #[test]
    fn comments_and_order_are_canonicalized() {
        let messy = "# example\nk: 1\n  r: 2\ncandidates: a b c\ndistinguished: a\naxis: a b c  # line\n\n[registered]\n1: a > b > c\n";
        let f = ElectionFile::parse(messy).unwrap();
        let canon = f.write();
        assert_eq!(ElectionFile::parse(&canon).unwrap().write(), canon);
        assert!(canon.starts_with("candidates: a b c\naxis"));
    }

    #[test]
    fn errors_carry_positions() {
        let bad = EXAMPLE.replace("1: c > a > b", "1: c > a > z");
        match ElectionFile::parse(&bad) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (9, 12)),
            other => panic!("{other:?}"),
        }
        let short = EXAMPLE.replace("1: c > a > b", "1: c > a");
        assert!(matches!(ElectionFile::parse(&short), Err(Error::Parse { line: 9, .. })));
        let unknown = EXAMPLE.replace("k: 2", "q: 2");
        assert!(matches!(ElectionFile::parse(&unknown), Err(Error::Parse { line: 5, column: 1, .. })));
        let missing = EXAMPLE.replace("k: 2\n", "");
        assert!(ElectionFile::parse(&missing).is_err());
    }

    #[test]
    fn empty_unregistered_gives_deletion_instance() {
        let f = ElectionFile::parse(EXAMPLE).unwrap();
        assert!(f.instance(Problem::Dv, None).is_err());
        let inst = f.instance(Problem::Dv, Some(1)).unwrap();
        assert!(inst.validate().is_empty());
    }

    #[test]
    fn graph_format() {
        let g = parse_graph("graph 3 2\ne 1 0\ne 1 2\n").unwrap();
        assert_eq!(write_graph(&g), "graph 3 2\ne 0 1\ne 1 2\n");
        assert!(parse_graph("graph 3 3\ne 0 1\n").is_err());
        assert!(parse_graph("graph 2 1\ne 0 0\n").is_err());
    }

    #[test]
    fn mrsp_and_vis_formats() {
        let text = "mrsp 4 2 1\ncap 1 1 2 1\nset 0 1\nset 2 3\n";
        assert_eq!(write_mrsp(&parse_mrsp(text).unwrap()), text);
        let vis = "vis 2\ngroup 1 5\ngroup 3\n";
        assert_eq!(write_vis(&parse_vis(vis).unwrap()), vis);
        assert!(parse_vis("vis 3\ngroup 1\n").is_err());
    }
}
