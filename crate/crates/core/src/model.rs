//! Schema and constraint model.
//!
//! A schema is a collection of named sets, each carrying functions that map
//! its rows either to rows of another set (link functions, realized as
//! foreign keys) or to scalar values (attribute functions). A diagram
//! constraint pairs two composition chains that start on the same set `D`
//! and end on the same codomain; it is either commutative (`f(x) = g(x)` for
//! every `x` in `D`) or anti-commutative (`f(x) != g(x)` for every `x`).
//!
//! Chains are stored outermost-first: position 1 is the function applied
//! last and position `n` is the function defined on `D`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Chain token reserved for the identity mapping of the common domain.
pub const IDENTITY: &str = "identity";

/// Index of a set inside its [`Schema`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetId(pub usize);

/// Index of a function inside its [`Schema`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionId(pub usize);

/// Surrogate object identifier of a row: the set it lives in and its `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowId {
    pub set: SetId,
    pub x: u64,
}

impl RowId {
    pub fn new(set: SetId, x: u64) -> Self {
        Self { set, x }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarType {
    Text,
    Integer,
}

impl ScalarType {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarType::Text => "text",
            ScalarType::Integer => "integer",
        }
    }
}

/// A stored (non-null) value. Nulls are represented as `None` everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Text(String),
    Integer(i64),
    Row(RowId),
}

impl Value {
    pub fn as_row(&self) -> Option<RowId> {
        match self {
            Value::Row(row) => Some(*row),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Codomain {
    Set(SetId),
    Scalar(ScalarType),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetDef {
    pub name: String,
    /// The designated display attribute of the set.
    pub name_attribute: FunctionId,
    /// Functions defined on this set, in declaration order.
    pub functions: Vec<FunctionId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub domain: SetId,
    pub codomain: Codomain,
    pub nullable: bool,
    /// Column index of this function inside rows of its domain.
    pub slot: usize,
}

impl FunctionDef {
    pub fn is_link(&self) -> bool {
        matches!(self.codomain, Codomain::Set(_))
    }

    pub fn target_set(&self) -> Option<SetId> {
        match self.codomain {
            Codomain::Set(set) => Some(set),
            Codomain::Scalar(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    Commutative,
    AntiCommutative,
}

impl ConstraintKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintKind::Commutative => "commutative",
            ConstraintKind::AntiCommutative => "anticommutative",
        }
    }

    /// Whether a pair of non-null composed values violates this kind.
    pub fn violated_by(self, left: &Value, right: &Value) -> bool {
        match self {
            ConstraintKind::Commutative => left != right,
            ConstraintKind::AntiCommutative => left == right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// A resolved composition chain, outermost function first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    functions: Vec<FunctionId>,
}

impl ChainSpec {
    /// Panics on an empty list; chains always hold at least one function.
    pub fn new(functions: Vec<FunctionId>) -> Self {
        assert!(!functions.is_empty(), "a chain holds at least one function");
        Self { functions }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Function at 1-based `position` (1 = outermost).
    pub fn at(&self, position: usize) -> FunctionId {
        self.functions[position - 1]
    }

    pub fn outermost(&self) -> FunctionId {
        self.functions[0]
    }

    pub fn innermost(&self) -> FunctionId {
        self.functions[self.functions.len() - 1]
    }

    pub fn functions(&self) -> &[FunctionId] {
        &self.functions
    }

    /// Positions paired with functions, outermost first.
    pub fn positions(&self) -> impl Iterator<Item = (usize, FunctionId)> + '_ {
        self.functions.iter().enumerate().map(|(i, f)| (i + 1, *f))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramConstraint {
    pub id: String,
    pub kind: ConstraintKind,
    /// The common domain `D`.
    pub domain: SetId,
    pub left: ChainSpec,
    pub right: ChainSpec,
    /// Optional message template; `{left}`, `{right}` and `{witness}` are
    /// substituted when a violation is rendered.
    pub message: Option<String>,
}

impl DiagramConstraint {
    pub fn chain(&self, side: Side) -> &ChainSpec {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Re-walks both chains against `schema` and reports any broken
    /// invariant of an accepted constraint.
    pub fn check_well_formed(&self, schema: &Schema) -> Vec<ChainError> {
        let mut errors = Vec::new();
        let mut ends = Vec::new();
        for side in [Side::Left, Side::Right] {
            let chain = self.chain(side);
            let inner = schema.function(chain.innermost());
            if inner.domain != self.domain {
                errors.push(ChainError::DomainMismatch {
                    side,
                    expected: schema.set(self.domain).name.clone(),
                    actual: schema.set(inner.domain).name.clone(),
                });
            }
            for position in 1..chain.len() {
                let outer = schema.function(chain.at(position));
                let below = schema.function(chain.at(position + 1));
                match below.codomain {
                    Codomain::Set(set) if set == outer.domain => {}
                    Codomain::Set(set) => errors.push(ChainError::BrokenComposition {
                        side,
                        position,
                        name: outer.name.clone(),
                        expected: schema.set(set).name.clone(),
                        actual: schema.set(outer.domain).name.clone(),
                    }),
                    Codomain::Scalar(_) => errors.push(ChainError::AttributeInChain {
                        side,
                        position: position + 1,
                        name: below.name.clone(),
                    }),
                }
            }
            ends.push(schema.function(chain.outermost()).codomain);
        }
        if ends[0] != ends[1] {
            errors.push(ChainError::CodomainMismatch {
                left: schema.describe_codomain(ends[0]),
                right: schema.describe_codomain(ends[1]),
            });
        }
        if self.left.len() == 1 && self.right.len() == 1 {
            errors.push(ChainError::Refused(ConstraintClass::Hbfp));
        }
        errors
    }
}

/// Place of a constraint in the diagram-constraint taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintClass {
    /// `n > 1` or `m > 1`, neither side the identity: handled here.
    General,
    /// `n = m = 1`: a homogeneous binary function product (ir)reflexivity.
    Hbfp,
    /// One side is the identity of `D`: a self-map (ir)reflexivity.
    Local,
}

impl ConstraintClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintClass::General => "GENERAL",
            ConstraintClass::Hbfp => "HBFP",
            ConstraintClass::Local => "LOCAL",
        }
    }

    /// Which enforcement family handles a refused class.
    pub fn enforcement_pointer(self) -> &'static str {
        match self {
            ConstraintClass::General => "enforced by this engine",
            ConstraintClass::Hbfp => {
                "n = m = 1: enforce it as a homogeneous binary function product (ir)reflexivity constraint"
            }
            ConstraintClass::Local => {
                "one side is the identity: enforce it as a self-map (ir)reflexivity constraint"
            }
        }
    }
}

impl fmt::Display for ConstraintClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One side of a constraint after name resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolvedSide {
    Identity,
    Chain(ChainSpec),
}

impl ResolvedSide {
    fn len(&self) -> usize {
        match self {
            ResolvedSide::Identity => 0,
            ResolvedSide::Chain(chain) => chain.len(),
        }
    }
}

/// A constraint whose chains resolved, before it is admitted into a schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintCandidate {
    pub id: String,
    pub kind: ConstraintKind,
    pub domain: SetId,
    pub left: ResolvedSide,
    pub right: ResolvedSide,
    pub message: Option<String>,
}

pub fn classify_constraint(candidate: &ConstraintCandidate) -> ConstraintClass {
    let left_identity = matches!(candidate.left, ResolvedSide::Identity);
    let right_identity = matches!(candidate.right, ResolvedSide::Identity);
    if left_identity != right_identity {
        ConstraintClass::Local
    } else if candidate.left.len() == 1 && candidate.right.len() == 1 {
        ConstraintClass::Hbfp
    } else {
        ConstraintClass::General
    }
}

// ---------------------------------------------------------------------------
// Unresolved input

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawCodomain {
    Set(String),
    Scalar(ScalarType),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFunction {
    pub name: String,
    pub codomain: RawCodomain,
    pub nullable: bool,
    /// Marks the set's display attribute.
    pub is_name: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSet {
    pub name: String,
    pub functions: Vec<RawFunction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawChain {
    Identity,
    /// Function names, outermost first.
    Functions(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawConstraint {
    pub id: String,
    pub kind: ConstraintKind,
    pub domain: String,
    pub left: RawChain,
    pub right: RawChain,
    pub message: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawSchema {
    pub name: String,
    pub sets: Vec<RawSet>,
    pub constraints: Vec<RawConstraint>,
}

// ---------------------------------------------------------------------------
// Errors

/// Problems found while resolving one constraint's chains. Positions are
/// 1-based and outermost-first, like [`ChainSpec::at`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("unknown function `{name}` at {} position {position}", side.as_str())]
    UnknownFunction {
        side: Side,
        position: usize,
        name: String,
    },
    #[error(
        "broken composition at {} position {position}: `{name}` is defined on {actual}, expected a function on {expected}",
        side.as_str()
    )]
    BrokenComposition {
        side: Side,
        position: usize,
        name: String,
        expected: String,
        actual: String,
    },
    #[error(
        "attribute function `{name}` at {} position {position} cannot be composed further",
        side.as_str()
    )]
    AttributeInChain {
        side: Side,
        position: usize,
        name: String,
    },
    #[error("{} chain starts on {actual}, expected the common domain {expected}", side.as_str())]
    DomainMismatch {
        side: Side,
        expected: String,
        actual: String,
    },
    #[error("chains end on different codomains: left {left}, right {right}")]
    CodomainMismatch { left: String, right: String },
    #[error("unknown common domain `{name}`")]
    UnknownDomain { name: String },
    #[error("both sides are the identity mapping")]
    DegenerateIdentity,
    #[error("constraint classified {0}; {ptr}", ptr = .0.enforcement_pointer())]
    Refused(ConstraintClass),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("set `{name}` is declared more than once")]
    DuplicateSet { set: usize, name: String },
    #[error("function `{name}` is declared more than once on the same set")]
    DuplicateFunction {
        set: usize,
        function: usize,
        name: String,
    },
    #[error("`{name}` is a reserved word")]
    ReservedIdentifier {
        set: usize,
        function: Option<usize>,
        name: String,
    },
    #[error("link `{function_name}` targets unknown set `{target}`")]
    UnknownLinkTarget {
        set: usize,
        function: usize,
        function_name: String,
        target: String,
    },
    #[error("set `{name}` declares no name attribute")]
    MissingNameAttribute { set: usize, name: String },
    #[error("set `{name}` declares more than one name attribute")]
    MultipleNameAttributes {
        set: usize,
        function: usize,
        name: String,
    },
    #[error("constraint `{id}` is declared more than once")]
    DuplicateConstraint { constraint: usize, id: String },
    #[error("constraint `{id}` is declared on unknown set `{name}`")]
    UnknownDomain {
        constraint: usize,
        id: String,
        name: String,
    },
    #[error("constraint `{id}`: {error}")]
    Chain {
        constraint: usize,
        id: String,
        error: ChainError,
    },
}

// ---------------------------------------------------------------------------
// Schema

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    sets: Vec<SetDef>,
    functions: Vec<FunctionDef>,
    constraints: Vec<DiagramConstraint>,
    set_index: BTreeMap<String, SetId>,
}

impl Schema {
    /// Builds and validates a schema; every problem is reported at once and
    /// no partial schema escapes.
    pub fn build(raw: &RawSchema) -> Result<Schema, Vec<SchemaError>> {
        let mut errors = Vec::new();
        let mut schema = Schema {
            name: raw.name.clone(),
            sets: Vec::new(),
            functions: Vec::new(),
            constraints: Vec::new(),
            set_index: BTreeMap::new(),
        };

        for (si, set) in raw.sets.iter().enumerate() {
            if set.name == IDENTITY {
                errors.push(SchemaError::ReservedIdentifier {
                    set: si,
                    function: None,
                    name: set.name.clone(),
                });
            }
            if schema.set_index.contains_key(&set.name) {
                errors.push(SchemaError::DuplicateSet {
                    set: si,
                    name: set.name.clone(),
                });
            } else {
                schema.set_index.insert(set.name.clone(), SetId(si));
            }
            schema.sets.push(SetDef {
                name: set.name.clone(),
                name_attribute: FunctionId(usize::MAX),
                functions: Vec::new(),
            });
        }

        for (si, set) in raw.sets.iter().enumerate() {
            let set_id = SetId(si);
            let mut seen = BTreeMap::new();
            let mut name_attribute = None;
            for (fi, func) in set.functions.iter().enumerate() {
                if func.name == IDENTITY {
                    errors.push(SchemaError::ReservedIdentifier {
                        set: si,
                        function: Some(fi),
                        name: func.name.clone(),
                    });
                }
                if seen.insert(func.name.clone(), fi).is_some() {
                    errors.push(SchemaError::DuplicateFunction {
                        set: si,
                        function: fi,
                        name: func.name.clone(),
                    });
                }
                let codomain = match &func.codomain {
                    RawCodomain::Scalar(ty) => Codomain::Scalar(*ty),
                    RawCodomain::Set(target) => match schema.set_index.get(target) {
                        Some(id) => Codomain::Set(*id),
                        None => {
                            errors.push(SchemaError::UnknownLinkTarget {
                                set: si,
                                function: fi,
                                function_name: func.name.clone(),
                                target: target.clone(),
                            });
                            // Placeholder keeps indices aligned; the schema is discarded.
                            Codomain::Set(set_id)
                        }
                    },
                };
                let id = FunctionId(schema.functions.len());
                schema.functions.push(FunctionDef {
                    name: func.name.clone(),
                    domain: set_id,
                    codomain,
                    nullable: func.nullable,
                    slot: fi,
                });
                schema.sets[si].functions.push(id);
                if func.is_name {
                    if name_attribute.is_some() {
                        errors.push(SchemaError::MultipleNameAttributes {
                            set: si,
                            function: fi,
                            name: set.name.clone(),
                        });
                    } else {
                        name_attribute = Some(id);
                    }
                }
            }
            match name_attribute {
                Some(id) => schema.sets[si].name_attribute = id,
                None => errors.push(SchemaError::MissingNameAttribute {
                    set: si,
                    name: set.name.clone(),
                }),
            }
        }

        // Chain resolution needs a sound set/function layer.
        if !errors.is_empty() {
            return Err(errors);
        }

        let mut ids = BTreeMap::new();
        for (ci, raw_constraint) in raw.constraints.iter().enumerate() {
            if ids.insert(raw_constraint.id.clone(), ci).is_some() {
                errors.push(SchemaError::DuplicateConstraint {
                    constraint: ci,
                    id: raw_constraint.id.clone(),
                });
            }
            if schema.set_by_name(&raw_constraint.domain).is_none() {
                errors.push(SchemaError::UnknownDomain {
                    constraint: ci,
                    id: raw_constraint.id.clone(),
                    name: raw_constraint.domain.clone(),
                });
                continue;
            }
            match validate_diagram(&schema, raw_constraint) {
                Ok(constraint) => schema.constraints.push(constraint),
                Err(chain_errors) => {
                    errors.extend(chain_errors.into_iter().map(|error| SchemaError::Chain {
                        constraint: ci,
                        id: raw_constraint.id.clone(),
                        error,
                    }))
                }
            }
        }

        if errors.is_empty() {
            Ok(schema)
        } else {
            Err(errors)
        }
    }

    pub fn sets(&self) -> &[SetDef] {
        &self.sets
    }

    pub fn set_ids(&self) -> impl Iterator<Item = SetId> {
        (0..self.sets.len()).map(SetId)
    }

    pub fn functions(&self) -> &[FunctionDef] {
        &self.functions
    }

    pub fn constraints(&self) -> &[DiagramConstraint] {
        &self.constraints
    }

    pub fn set(&self, id: SetId) -> &SetDef {
        &self.sets[id.0]
    }

    pub fn function(&self, id: FunctionId) -> &FunctionDef {
        &self.functions[id.0]
    }

    pub fn set_by_name(&self, name: &str) -> Option<SetId> {
        self.set_index.get(name).copied()
    }

    /// The function called `name` whose domain is `set`.
    pub fn function_on(&self, set: SetId, name: &str) -> Option<FunctionId> {
        self.sets[set.0]
            .functions
            .iter()
            .copied()
            .find(|f| self.functions[f.0].name == name)
    }

    pub fn constraint(&self, id: &str) -> Option<&DiagramConstraint> {
        self.constraints.iter().find(|c| c.id == id)
    }

    /// Link functions whose codomain is `set`.
    pub fn links_into(&self, set: SetId) -> impl Iterator<Item = FunctionId> + '_ {
        self.functions
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.codomain == Codomain::Set(set))
            .map(|(i, _)| FunctionId(i))
    }

    pub fn describe_codomain(&self, codomain: Codomain) -> String {
        match codomain {
            Codomain::Set(set) => self.sets[set.0].name.clone(),
            Codomain::Scalar(ty) => ty.as_str().to_string(),
        }
    }

    /// Chain rendered with `∘`, outermost first.
    pub fn chain_text(&self, chain: &ChainSpec) -> String {
        chain
            .functions()
            .iter()
            .map(|f| self.function(*f).name.as_str())
            .collect::<Vec<_>>()
            .join(" ∘ ")
    }

    pub fn row_label(&self, row: RowId) -> String {
        format!("{}#{}", self.set(row.set).name, row.x)
    }

    /// Rebuilds the unresolved form; building it again yields an equal schema.
    pub fn to_raw(&self) -> RawSchema {
        let sets = self
            .sets
            .iter()
            .map(|set| RawSet {
                name: set.name.clone(),
                functions: set
                    .functions
                    .iter()
                    .map(|f| {
                        let def = self.function(*f);
                        RawFunction {
                            name: def.name.clone(),
                            codomain: match def.codomain {
                                Codomain::Set(target) => {
                                    RawCodomain::Set(self.set(target).name.clone())
                                }
                                Codomain::Scalar(ty) => RawCodomain::Scalar(ty),
                            },
                            nullable: def.nullable,
                            is_name: *f == set.name_attribute,
                        }
                    })
                    .collect(),
            })
            .collect();
        let chain_names = |chain: &ChainSpec| {
            RawChain::Functions(
                chain
                    .functions()
                    .iter()
                    .map(|f| self.function(*f).name.clone())
                    .collect(),
            )
        };
        let constraints = self
            .constraints
            .iter()
            .map(|c| RawConstraint {
                id: c.id.clone(),
                kind: c.kind,
                domain: self.set(c.domain).name.clone(),
                left: chain_names(&c.left),
                right: chain_names(&c.right),
                message: c.message.clone(),
            })
            .collect();
        RawSchema {
            name: self.name.clone(),
            sets,
            constraints,
        }
    }
}

// ---------------------------------------------------------------------------
// Resolution

enum Walk {
    Set(SetId),
    Scalar,
    Lost,
}

/// Resolves one side by walking domains from `domain` outward.
fn resolve_side(
    schema: &Schema,
    domain: SetId,
    side: Side,
    raw: &RawChain,
    errors: &mut Vec<ChainError>,
) -> Option<ResolvedSide> {
    let names = match raw {
        RawChain::Identity => return Some(ResolvedSide::Identity),
        RawChain::Functions(names) => names,
    };
    let before = errors.len();
    let mut resolved = vec![FunctionId(usize::MAX); names.len()];
    let mut walk = Walk::Set(domain);
    for position in (1..=names.len()).rev() {
        let name = &names[position - 1];
        if name == IDENTITY {
            errors.push(ChainError::UnknownFunction {
                side,
                position,
                name: name.clone(),
            });
            walk = Walk::Lost;
            continue;
        }
        let expected = match walk {
            Walk::Set(set) => set,
            Walk::Scalar => {
                let below = &names[position];
                errors.push(ChainError::AttributeInChain {
                    side,
                    position: position + 1,
                    name: below.clone(),
                });
                walk = Walk::Lost;
                continue;
            }
            Walk::Lost => continue,
        };
        let found = schema.function_on(expected, name).or_else(|| {
            let elsewhere: Vec<FunctionId> = schema
                .set_ids()
                .filter_map(|set| schema.function_on(set, name))
                .collect();
            match elsewhere.first() {
                None => {
                    errors.push(ChainError::UnknownFunction {
                        side,
                        position,
                        name: name.clone(),
                    });
                    None
                }
                Some(first) => {
                    errors.push(ChainError::BrokenComposition {
                        side,
                        position,
                        name: name.clone(),
                        expected: schema.set(expected).name.clone(),
                        actual: schema.set(schema.function(*first).domain).name.clone(),
                    });
                    // Keep walking when the misplaced function is unambiguous.
                    if elsewhere.len() == 1 {
                        Some(*first)
                    } else {
                        None
                    }
                }
            }
        });
        match found {
            Some(f) => {
                resolved[position - 1] = f;
                walk = match schema.function(f).codomain {
                    Codomain::Set(set) => Walk::Set(set),
                    Codomain::Scalar(_) => Walk::Scalar,
                };
            }
            None => walk = Walk::Lost,
        }
    }
    if errors.len() == before {
        Some(ResolvedSide::Chain(ChainSpec::new(resolved)))
    } else {
        None
    }
}

/// Resolves both chains of `raw` against `schema`'s sets and functions.
/// Returns the candidate (whatever its class) or every resolution error.
pub fn resolve_constraint(
    schema: &Schema,
    raw: &RawConstraint,
) -> Result<ConstraintCandidate, Vec<ChainError>> {
    let Some(domain) = schema.set_by_name(&raw.domain) else {
        return Err(vec![ChainError::UnknownDomain {
            name: raw.domain.clone(),
        }]);
    };
    let mut errors = Vec::new();
    let left = resolve_side(schema, domain, Side::Left, &raw.left, &mut errors);
    let right = resolve_side(schema, domain, Side::Right, &raw.right, &mut errors);
    let (Some(left), Some(right)) = (left, right) else {
        return Err(errors);
    };
    let end = |side: &ResolvedSide| match side {
        ResolvedSide::Identity => Codomain::Set(domain),
        ResolvedSide::Chain(chain) => schema.function(chain.outermost()).codomain,
    };
    if matches!(
        (&left, &right),
        (ResolvedSide::Identity, ResolvedSide::Identity)
    ) {
        errors.push(ChainError::DegenerateIdentity);
    } else if end(&left) != end(&right) {
        errors.push(ChainError::CodomainMismatch {
            left: schema.describe_codomain(end(&left)),
            right: schema.describe_codomain(end(&right)),
        });
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(ConstraintCandidate {
        id: raw.id.clone(),
        kind: raw.kind,
        domain,
        left,
        right,
        message: raw.message.clone(),
    })
}

/// Resolves, checks and classifies `raw`; only GENERAL constraints come back
/// as a [`DiagramConstraint`], other classes are refused with a diagnostic
/// naming the class.
pub fn validate_diagram(
    schema: &Schema,
    raw: &RawConstraint,
) -> Result<DiagramConstraint, Vec<ChainError>> {
    let candidate = resolve_constraint(schema, raw)?;
    match classify_constraint(&candidate) {
        ConstraintClass::General => {}
        refused => return Err(vec![ChainError::Refused(refused)]),
    }
    let (ResolvedSide::Chain(left), ResolvedSide::Chain(right)) = (candidate.left, candidate.right)
    else {
        unreachable!("GENERAL constraints have no identity side");
    };
    Ok(DiagramConstraint {
        id: candidate.id,
        kind: candidate.kind,
        domain: candidate.domain,
        left,
        right,
        message: candidate.message,
    })
}
