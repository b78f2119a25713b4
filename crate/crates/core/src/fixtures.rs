//! Shared quiver presentations used across the test suites. Arrow names
//! are ASCII stand-ins for the usual Greek letters.

/// Cluster-tilted algebra of type A5: two oriented 3-cycles glued at vertex 3,
/// bound by the six length-2 paths around the cycles.
pub const A5_CYCLIC: &str = "
vertices: 1 2 3 4 5
arrow a: 1 -> 4
arrow b: 4 -> 3
arrow g: 3 -> 1
arrow m: 3 -> 2
arrow n: 2 -> 5
arrow l: 5 -> 3
relation a*b
relation b*g
relation g*a
relation l*m
relation m*n
relation n*l
";

/// The tilted seed for the A5 example: arrows a: 1->4, b: 4->3, m: 3->2,
/// l: 5->3 bound by a*b and l*m.
pub const A5_SEED: &str = "
vertices: 1 2 3 4 5
arrow a: 1 -> 4
arrow b: 4 -> 3
arrow m: 3 -> 2
arrow l: 5 -> 3
relation a*b
relation l*m
";

/// Tilted algebra of type D4 bound by the commutativity relation a*b = g*d.
pub const D4_SEED: &str = "
vertices: 1 2 3 4
arrow a: 4 -> 2
arrow b: 2 -> 1
arrow g: 4 -> 3
arrow d: 3 -> 1
relation a*b - g*d
";

/// Representation-infinite tilted algebra of type D~4:
/// a: 1->2, b: 2->4, g: 1->3, d: 3->4, e: 4->5, bound by a*b = g*d and a*b*e.
pub const D4T_SEED: &str = "
vertices: 1 2 3 4 5
arrow a: 1 -> 2
arrow b: 2 -> 4
arrow g: 1 -> 3
arrow d: 3 -> 4
arrow e: 4 -> 5
relation a*b - g*d
relation a*b*e
";

/// Tilted algebra of tree type D5 with relations a*b*g and a*d.
pub const D5_SEED: &str = "
vertices: 1 2 3 4 5
arrow g: 2 -> 1
arrow b: 3 -> 2
arrow d: 3 -> 4
arrow a: 5 -> 3
relation a*b*g
relation a*d
";

/// Euclidean A~2: a double arrow 2 -> 1 plus 3 -> 2, bound by a*b. Not of
/// tree type; completions can fail here.
pub const A2T_SEED: &str = "
vertices: 1 2 3
arrow b: 2 -> 1
arrow g: 2 -> 1
arrow a: 3 -> 2
relation a*b
";

/// Hereditary A2.
pub const A2: &str = "
vertices: 1 2
arrow a: 2 -> 1
";

/// Serial A4 with one zero relation; the running counterexample about
/// irreducible morphisms between projectives vs injectives.
pub const A4_SERIAL: &str = "
vertices: 1 2 3 4
arrow g: 2 -> 1
arrow b: 3 -> 2
arrow a: 4 -> 3
relation a*b
";

/// The tube example seed: a: 1->3, g: 2->3, double arrow b,d: 3->4, bound by
/// a*b and g*d. Tilted of Euclidean type.
pub const TUBE_SEED: &str = "
vertices: 1 2 3 4
arrow a: 1 -> 3
arrow g: 2 -> 3
arrow b: 3 -> 4
arrow d: 3 -> 4
relation a*b
relation g*d
";

/// One vertex, no arrows.
pub const POINT: &str = "vertices: 1";
