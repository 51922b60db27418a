//! Canonical JSON artifacts: sorted keys, compact, one trailing newline.
//! Probabilities are `"num/den"` strings; graphs name nodes by id.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::dsep::DsepQuery;
use crate::error::{Error, Result};
use crate::graph::{Mdag, Node, NodeId, NodeKind, Pdag};
use crate::models::{
    Cards, CommonAncestorFact, Construction, DconnectionFact, DistinguishingWitness, DominanceCertificate,
    FullConditional, Mechanism, Params, Pattern, ProbeDataset, Table, Verdict, Witness,
};
use crate::order::{HasseDiagram, MdagCatalog};
use crate::reduction::{ReductionStep, ReductionTrace, Rule};
use crate::scalar::Probability;

/// Index convention stored with every full conditional.
pub const FULL_CONDITIONAL_INDEX: &str =
    "values[encode(sharp) * states + encode(flat)], encode row-major over nodes, first node most significant";

/// Compact text with sorted keys and a trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

/// Conversion to and from the canonical JSON value.
pub trait JsonCodec: Sized {
    fn to_value(&self) -> Value;

    fn from_value(v: &Value) -> Result<Self>;

    fn to_json(&self) -> String {
        canonical(&self.to_value())
    }

    fn from_json(text: &str) -> Result<Self> {
        Self::from_value(&parse(text)?)
    }
}

fn bad(what: &str) -> Error {
    Error::Parse(what.to_string())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(&format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(&format!("{what} must be an array")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(&format!("{what} must be an object")))
}

fn string<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(&format!("{what} must be a string")))
}

fn uint(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| bad(&format!("{what} must be a non-negative integer")))
}

fn id(v: &Value) -> Result<NodeId> {
    NodeId::new(string(v, "node id")?)
}

fn ids(v: &Value) -> Result<Vec<NodeId>> {
    array(v, "node list")?.iter().map(id).collect()
}

fn uints(v: &Value, what: &str) -> Result<Vec<usize>> {
    array(v, what)?.iter().map(|x| uint(x, what)).collect()
}

fn id_values(v: &[NodeId]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn prob_value<P: Probability>(p: &P) -> Value {
    Value::String(p.to_text())
}

fn prob<P: Probability>(v: &Value) -> Result<P> {
    let s = string(v, "probability")?;
    P::parse_text(s).ok_or_else(|| bad(&format!("bad probability {s:?}")))
}

fn probs<P: Probability>(v: &Value) -> Result<Vec<P>> {
    array(v, "probability list")?.iter().map(prob).collect()
}

fn kind(v: &Value) -> Result<NodeKind> {
    match string(v, "kind")? {
        "visible" => Ok(NodeKind::Visible),
        "latent" => Ok(NodeKind::Latent),
        "input" => Ok(NodeKind::Input),
        other => Err(bad(&format!("unknown node kind {other:?}"))),
    }
}

fn node_objects(nodes: &[Node]) -> Value {
    Value::Array(nodes.iter().map(|n| json!({"id": n.id.as_str(), "kind": n.kind.as_str()})).collect())
}

/// Nodes as `{"id","kind"}` objects or, for plain visible nodes, bare ids.
fn nodes_from(v: &Value) -> Result<Vec<Node>> {
    array(v, "nodes")?
        .iter()
        .map(|n| match n {
            Value::String(_) => Ok(Node::new(id(n)?, NodeKind::Visible)),
            _ => Ok(Node::new(id(field(n, "id")?)?, kind(field(n, "kind")?)?)),
        })
        .collect()
}

fn edge_pairs(v: &Value) -> Result<Vec<(NodeId, NodeId)>> {
    array(v, "edges")?
        .iter()
        .map(|e| match array(e, "edge")?.as_slice() {
            [a, b] => Ok((id(a)?, id(b)?)),
            _ => Err(bad("an edge is a two-element array")),
        })
        .collect()
}

fn edges_value(edges: &[(NodeId, NodeId)]) -> Value {
    Value::Array(edges.iter().map(|(a, b)| json!([a.as_str(), b.as_str()])).collect())
}

/// Comma-joined values: `[0, 1]` is `"0,1"`.
pub fn assignment_key(x: &[usize]) -> String {
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_assignment_key(key: &str) -> Result<Vec<usize>> {
    if key.is_empty() {
        return Ok(Vec::new());
    }
    key.split(',').map(|s| s.trim().parse().map_err(|_| bad(&format!("bad assignment key {key:?}")))).collect()
}

impl JsonCodec for Pdag {
    fn to_value(&self) -> Value {
        let edges: Vec<(NodeId, NodeId)> = self.edges().iter().map(|&(u, v)| (self.id(u).clone(), self.id(v).clone())).collect();
        json!({"nodes": node_objects(self.nodes()), "edges": edges_value(&edges)})
    }

    fn from_value(v: &Value) -> Result<Self> {
        let nodes = nodes_from(field(v, "nodes")?)?;
        let edges = edge_pairs(field(v, "edges")?)?;
        Pdag::new(
            nodes.into_iter().map(|n| (n.id.to_string(), n.kind)),
            edges.into_iter().map(|(a, b)| (a.to_string(), b.to_string())),
        )
    }
}

/// Facets of size one are implied and omitted.
impl JsonCodec for Mdag {
    fn to_value(&self) -> Value {
        let nodes = if self.has_inputs() { node_objects(self.nodes()) } else { id_values(&self.ids()) };
        let facets: Vec<Value> = self
            .complex()
            .nontrivial_facets()
            .map(|f| Value::Array(f.iter().map(|&i| Value::String(self.id(i).to_string())).collect()))
            .collect();
        json!({"nodes": nodes, "edges": edges_value(&self.edge_ids()), "facets": facets})
    }

    fn from_value(v: &Value) -> Result<Self> {
        let nodes = nodes_from(field(v, "nodes")?)?;
        let edges = edge_pairs(field(v, "edges")?)?;
        let facets = match v.get("facets") {
            Some(f) => array(f, "facets")?.iter().map(ids).collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        Mdag::from_ids(nodes, &edges, &facets)
    }
}

impl JsonCodec for ReductionTrace {
    fn to_value(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| json!({"rule": serde_json::to_value(s.rule).expect("unit enum"), "target": s.target.as_str(), "graph": s.graph.to_value()}))
            .collect();
        json!({"steps": steps})
    }

    fn from_value(v: &Value) -> Result<Self> {
        let steps = array(field(v, "steps")?, "steps")?
            .iter()
            .map(|s| {
                Ok(ReductionStep {
                    rule: serde_json::from_value::<Rule>(field(s, "rule")?.clone())?,
                    target: id(field(s, "target")?)?,
                    graph: Pdag::from_value(field(s, "graph")?)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReductionTrace { steps })
    }
}

fn cards_value(cards: &Cards) -> Value {
    Value::Object(cards.iter().map(|(k, &c)| (k.to_string(), json!(c))).collect())
}

fn cards_from(v: &Value) -> Result<Cards> {
    object(v, "cards")?.iter().map(|(k, c)| Ok((NodeId::new(k.as_str())?, uint(c, "cardinality")?))).collect()
}

impl<P: Probability> JsonCodec for Params<P> {
    fn to_value(&self) -> Value {
        let mechanisms: Map<String, Value> = self
            .mechanisms
            .iter()
            .map(|(k, m)| {
                let error: Vec<Value> = m.error.iter().map(prob_value).collect();
                (k.to_string(), json!({"parents": id_values(&m.parents), "error": error, "table": m.table}))
            })
            .collect();
        json!({"cards": cards_value(&self.cards), "mechanisms": mechanisms})
    }

    fn from_value(v: &Value) -> Result<Self> {
        let cards = cards_from(field(v, "cards")?)?;
        let mechanisms = object(field(v, "mechanisms")?, "mechanisms")?
            .iter()
            .map(|(k, m)| {
                let mech = Mechanism {
                    parents: ids(field(m, "parents")?)?,
                    error: probs(field(m, "error")?)?,
                    table: uints(field(m, "table")?, "response table")?,
                };
                Ok((NodeId::new(k.as_str())?, mech))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Params { cards, mechanisms })
    }
}

/// Entries keyed by assignment, every entry present.
fn table_entries<P: Probability>(t: &Table<P>) -> Value {
    Value::Object(
        crate::models::assignments(t.cards())
            .zip(t.values())
            .map(|(x, p)| (assignment_key(&x), prob_value(p)))
            .collect(),
    )
}

/// Dense values from keyed entries; absent keys are zero.
fn table_values<P: Probability>(v: &Value, cards: &[usize]) -> Result<Vec<P>> {
    let mut values = vec![P::zero(); cards.iter().product()];
    for (k, p) in object(v, "table")? {
        let x = parse_assignment_key(k)?;
        if x.len() != cards.len() || x.iter().zip(cards).any(|(&a, &c)| a >= c) {
            return Err(bad(&format!("assignment {k:?} does not fit cards {cards:?}")));
        }
        values[crate::models::encode(&x, cards)] = prob(p)?;
    }
    Ok(values)
}

impl<P: Probability> JsonCodec for Table<P> {
    fn to_value(&self) -> Value {
        json!({"nodes": id_values(self.nodes()), "cards": self.cards(), "table": table_entries(self)})
    }

    fn from_value(v: &Value) -> Result<Self> {
        let nodes = ids(field(v, "nodes")?)?;
        let cards = uints(field(v, "cards")?, "cards")?;
        let values = table_values(field(v, "table")?, &cards)?;
        Table::new(nodes, cards, values)
    }
}

impl<P: Probability> JsonCodec for FullConditional<P> {
    fn to_value(&self) -> Value {
        let values: Vec<Value> = self.values().iter().map(prob_value).collect();
        json!({"nodes": id_values(self.nodes()), "cards": self.cards(), "index": FULL_CONDITIONAL_INDEX, "values": values})
    }

    fn from_value(v: &Value) -> Result<Self> {
        if let Some(index) = v.get("index") {
            if string(index, "index")? != FULL_CONDITIONAL_INDEX {
                return Err(bad("unsupported index convention"));
            }
        }
        FullConditional::new(ids(field(v, "nodes")?)?, uints(field(v, "cards")?, "cards")?, probs(field(v, "values")?)?)
    }
}

impl<P: Probability> JsonCodec for ProbeDataset<P> {
    fn to_value(&self) -> Value {
        let patterns: Vec<Value> = self
            .patterns()
            .iter()
            .map(|pat| {
                let values: Map<String, Value> = pat.do_set.iter().zip(&pat.values).map(|(k, &x)| (k.to_string(), json!(x))).collect();
                json!({"do": id_values(&pat.do_set), "values": values, "table": table_entries(&pat.table)})
            })
            .collect();
        json!({"nodes": id_values(self.nodes()), "cards": cards_value(&self.cards_map()), "patterns": patterns})
    }

    /// `"nodes"` fixes the temporal order; without it the order of the
    /// `"cards"` keys is used.
    fn from_value(v: &Value) -> Result<Self> {
        let card_map = cards_from(field(v, "cards")?)?;
        let nodes = match v.get("nodes") {
            Some(n) => ids(n)?,
            None => card_map.keys().cloned().collect(),
        };
        let cards = nodes
            .iter()
            .map(|n| card_map.get(n).copied().ok_or_else(|| bad(&format!("no cardinality for {n}"))))
            .collect::<Result<Vec<_>>>()?;
        let patterns = array(field(v, "patterns")?, "patterns")?
            .iter()
            .map(|p| {
                let do_set = ids(field(p, "do")?)?;
                let given = object(field(p, "values")?, "values")?;
                let values = do_set
                    .iter()
                    .map(|d| uint(given.get(d.as_str()).ok_or_else(|| bad(&format!("no do-value for {d}")))?, "do-value"))
                    .collect::<Result<Vec<_>>>()?;
                let keep: Vec<usize> = (0..nodes.len()).filter(|&k| !do_set.contains(&nodes[k])).collect();
                let t_nodes: Vec<NodeId> = keep.iter().map(|&k| nodes[k].clone()).collect();
                let t_cards: Vec<usize> = keep.iter().map(|&k| cards[k]).collect();
                let t_values = table_values(field(p, "table")?, &t_cards)?;
                Ok(Pattern { do_set, values, table: Table::new(t_nodes, t_cards, t_values)? })
            })
            .collect::<Result<Vec<_>>>()?;
        ProbeDataset::new(nodes, cards, patterns)
    }
}

impl JsonCodec for DsepQuery {
    fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("plain struct")
    }

    fn from_value(v: &Value) -> Result<Self> {
        Ok(serde_json::from_value(v.clone())?)
    }
}

/// A d-separation query with its answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsepVerdict {
    pub query: DsepQuery,
    pub d_separated: bool,
}

impl JsonCodec for DsepVerdict {
    fn to_value(&self) -> Value {
        json!({"query": self.query.to_value(), "d_separated": self.d_separated})
    }

    fn from_value(v: &Value) -> Result<Self> {
        let d = field(v, "d_separated")?.as_bool().ok_or_else(|| bad("d_separated must be a boolean"))?;
        Ok(DsepVerdict { query: DsepQuery::from_value(field(v, "query")?)?, d_separated: d })
    }
}

impl<P: Probability> JsonCodec for Verdict<P> {
    fn to_value(&self) -> Value {
        let mut out = match self {
            Verdict::FeasibleWithParams(par) => json!({"params": par.to_value()}),
            Verdict::InfeasibleDconnection(f) => json!({
                "node": f.node.as_str(),
                "intervened": id_values(&f.intervened),
                "observed": f.observed,
                "observed_probability": prob_value(&f.observed_probability),
                "bound": prob_value(&f.bound),
            }),
            Verdict::InfeasibleCommonAncestor(f) => json!({"nodes": id_values(&f.nodes), "p": prob_value(&f.p)}),
            Verdict::Undecided => json!({}),
        };
        out["status"] = json!(self.status());
        out
    }

    fn from_value(v: &Value) -> Result<Self> {
        match string(field(v, "status")?, "status")? {
            "feasible-with-params" => Ok(Verdict::FeasibleWithParams(Params::from_value(field(v, "params")?)?)),
            "infeasible-dconnection" => Ok(Verdict::InfeasibleDconnection(DconnectionFact {
                node: id(field(v, "node")?)?,
                intervened: ids(field(v, "intervened")?)?,
                observed: uints(field(v, "observed")?, "observed")?,
                observed_probability: prob(field(v, "observed_probability")?)?,
                bound: prob(field(v, "bound")?)?,
            })),
            "infeasible-common-ancestor" => Ok(Verdict::InfeasibleCommonAncestor(CommonAncestorFact {
                nodes: ids(field(v, "nodes")?)?,
                p: prob(field(v, "p")?)?,
            })),
            "undecided" => Ok(Verdict::Undecided),
            other => Err(bad(&format!("unknown verdict status {other:?}"))),
        }
    }
}

impl<P: Probability> JsonCodec for Construction<P> {
    fn to_value(&self) -> Value {
        match self {
            Construction::Chain { from, to, mediaries } => {
                json!({"type": "chain", "from": from.as_str(), "to": to.as_str(), "mediaries": id_values(mediaries)})
            }
            Construction::Copy { face, p } => json!({"type": "copy", "face": id_values(face), "p": prob_value(p)}),
        }
    }

    fn from_value(v: &Value) -> Result<Self> {
        match string(field(v, "type")?, "construction type")? {
            "chain" => Ok(Construction::Chain {
                from: id(field(v, "from")?)?,
                to: id(field(v, "to")?)?,
                mediaries: ids(field(v, "mediaries")?)?,
            }),
            "copy" => Ok(Construction::Copy { face: ids(field(v, "face")?)?, p: prob(field(v, "p")?)? }),
            other => Err(bad(&format!("unknown construction {other:?}"))),
        }
    }
}

impl<P: Probability> JsonCodec for Witness<P> {
    fn to_value(&self) -> Value {
        match self {
            Witness::Dominates(cert) => {
                let faces: Vec<Value> = cert.faces.iter().map(|(small, big)| json!([id_values(small), id_values(big)])).collect();
                json!({"kind": "dominates", "edges": edges_value(&cert.edges), "faces": faces})
            }
            Witness::Distinguishing(w) => json!({
                "kind": "distinguishing",
                "construction": w.construction.to_value(),
                "dataset": w.dataset.to_value(),
                "params": w.params.to_value(),
                "verdict": w.verdict.to_value(),
            }),
        }
    }

    fn from_value(v: &Value) -> Result<Self> {
        match string(field(v, "kind")?, "witness kind")? {
            "dominates" => {
                let faces = array(field(v, "faces")?, "faces")?
                    .iter()
                    .map(|pair| match array(pair, "face pair")?.as_slice() {
                        [small, big] => Ok((ids(small)?, ids(big)?)),
                        _ => Err(bad("a face pair is a two-element array")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Witness::Dominates(DominanceCertificate { edges: edge_pairs(field(v, "edges")?)?, faces }))
            }
            "distinguishing" => Ok(Witness::Distinguishing(Box::new(DistinguishingWitness {
                construction: Construction::from_value(field(v, "construction")?)?,
                dataset: ProbeDataset::from_value(field(v, "dataset")?)?,
                params: Params::from_value(field(v, "params")?)?,
                verdict: Verdict::from_value(field(v, "verdict")?)?,
            }))),
            other => Err(bad(&format!("unknown witness kind {other:?}"))),
        }
    }
}

/// Cover edges as `[lower, upper]` catalog indices.
impl JsonCodec for HasseDiagram {
    fn to_value(&self) -> Value {
        let edges: Vec<Value> = self.covers.iter().map(|&(lo, up)| json!([lo, up])).collect();
        json!({"elements": self.elements, "edges": edges})
    }

    fn from_value(v: &Value) -> Result<Self> {
        let elements = uint(field(v, "elements")?, "elements")?;
        let covers = array(field(v, "edges")?, "edges")?
            .iter()
            .map(|e| match uints(e, "cover")?.as_slice() {
                &[lo, up] if lo < elements && up < elements => Ok((lo, up)),
                _ => Err(bad("a cover is a pair of in-range indices")),
            })
            .collect::<Result<_>>()?;
        Ok(HasseDiagram { elements, covers })
    }
}

/// One catalog entry per line: the mDAG object with its `"index"`.
pub fn catalog_jsonl(cat: &MdagCatalog) -> String {
    (0..cat.len())
        .map(|i| {
            let mut v = cat.entry(i).to_value();
            v["index"] = json!(i);
            canonical(&v)
        })
        .collect()
}

/// Inverse of [`catalog_jsonl`].
pub fn parse_catalog_jsonl(text: &str) -> Result<Vec<(usize, Mdag)>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v = parse(l)?;
            Ok((uint(field(&v, "index")?, "index")?, Mdag::from_value(&v)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{full_conditional, generate_all_patterns, uniform_cards};
    use crate::reduction::{canonical_pdag, re_reduce};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn confounded() -> Pdag {
        Pdag::new(
            [("a", NodeKind::Visible), ("u", NodeKind::Latent), ("b", NodeKind::Visible)],
            [("a", "b"), ("u", "a"), ("u", "b")],
        )
        .unwrap()
    }

    #[test]
    fn pdag_text_is_canonical() {
        let g = Pdag::new([("b", NodeKind::Input), ("a", NodeKind::Visible)], [("b", "a")]).unwrap();
        let text = g.to_json();
        assert_eq!(text, "{\"edges\":[[\"b\",\"a\"]],\"nodes\":[{\"id\":\"b\",\"kind\":\"input\"},{\"id\":\"a\",\"kind\":\"visible\"}]}\n");
        assert_eq!(Pdag::from_json(&text).unwrap(), g);
    }

    #[test]
    fn mdag_round_trip_omits_singletons() {
        let m = Mdag::visible(["a", "b", "c"], [("a", "b")], &[vec!["a", "c"]]).unwrap();
        let text = m.to_json();
        assert_eq!(text, "{\"edges\":[[\"a\",\"b\"]],\"facets\":[[\"a\",\"c\"]],\"nodes\":[\"a\",\"b\",\"c\"]}\n");
        assert_eq!(Mdag::from_json(&text).unwrap(), m);
    }

    #[test]
    fn trace_round_trip() {
        let (_, trace) = re_reduce(&confounded());
        assert_eq!(ReductionTrace::from_json(&trace.to_json()).unwrap(), trace);
    }

    #[test]
    fn model_artifacts_round_trip() {
        let g = confounded();
        let par: Params<Q> = Params::random(&g, &uniform_cards(&g, 2), 3, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(Params::<Q>::from_json(&par.to_json()).unwrap(), par);
        let fc = full_conditional(&g, &par).unwrap();
        assert_eq!(FullConditional::<Q>::from_json(&fc.to_json()).unwrap(), fc);
        let ds = generate_all_patterns(&g, &par, false).unwrap();
        let back = ProbeDataset::<Q>::from_json(&ds.to_json()).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn dataset_keys_and_rationals() {
        let m = Mdag::visible(["a", "b"], Vec::<(&str, &str)>::new(), &[vec!["a", "b"]]).unwrap();
        let (_, ds) = crate::models::copy_construction::<Q, _>(&m, &["a", "b"], Q::half()).unwrap();
        let v = ds.to_value();
        let obs = &v["patterns"][0];
        assert_eq!(obs["do"], json!([]));
        assert_eq!(obs["table"]["0,0"], json!("1/2"));
        assert_eq!(obs["table"]["0,1"], json!("0/1"));
        assert_eq!(v["cards"], json!({"a": 2, "b": 2}));
    }

    #[test]
    fn witness_round_trip() {
        let g = Mdag::visible(["a", "b", "c"], [("a", "b")], &[vec!["a", "c"]]).unwrap();
        let h = Mdag::visible(["a", "b", "c"], [("a", "b")], &[vec!["a", "b", "c"]]).unwrap();
        for (x, y) in [(&g, &h), (&h, &g)] {
            let w = crate::models::dominance_witness::<Q>(x, y).unwrap();
            assert_eq!(Witness::<Q>::from_json(&w.to_json()).unwrap(), w);
        }
        let _ = canonical_pdag(&g);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        assert!(matches!(Pdag::from_json("{\"nodes\":[]}"), Err(Error::Parse(_))));
        assert!(matches!(Pdag::from_json("{\"nodes\":[{\"id\":\"a\",\"kind\":\"odd\"}],\"edges\":[]}"), Err(Error::Parse(_))));
        assert!(Pdag::from_json("not json").is_err());
        assert!(matches!(Verdict::<Q>::from_json("{\"status\":\"maybe\"}"), Err(Error::Parse(_))));
    }
}
