#include "relsite/fixtures.hpp"

namespace relsite::fixtures {

namespace {

CatPtr discrete(const std::string& name, std::vector<std::string> objects) {
  CategoryData d;
  d.name = name;
  d.objects = std::move(objects);
  return validate_category(d).category;
}

NatTransform identity_phi(const RelativeProblem& prob) {
  NatTransform phi;
  phi.source = compose_functors(prob.p_prime, prob.A);
  phi.target = prob.p;
  const FinCategory& left = *prob.left.category;
  phi.components.resize(left.num_objects());
  for (int d = 0; d < left.num_objects(); ++d)
    phi.components[d] = prob.base.category->identities[prob.p.object_map[d]];
  return phi;
}

}  // namespace

CatPtr c2() {
  static CatPtr cat = [] {
    CategoryData d;
    d.name = "C2";
    d.objects = {"a", "b"};
    d.arrows = {{"f", "a", "b"}};
    return validate_category(d).category;
  }();
  return cat;
}

CatPtr point() {
  static CatPtr cat = terminal_category("1");
  return cat;
}

Topology j_trivial() {
  static Topology t = trivial_topology(c2());
  return t;
}

Topology j_one() {
  static Topology t = [] {
    CatPtr cat = c2();
    Sieve s{cat->object_index("b"), {cat->arrow_index("f")}};
    return generate_topology(cat, {s});
  }();
  return t;
}

RelativeProblem identity_problem() {
  static RelativeProblem prob = [] {
    RelativeProblem p;
    p.name = "identity";
    p.base = {c2(), j_one()};
    p.left = p.base;
    p.right = p.base;
    p.p = identity_functor(c2());
    p.p_prime = p.p;
    p.A = p.p;
    p.phi = identity_phi(p);
    return p;
  }();
  return prob;
}

RelativeProblem neg_problem() {
  static RelativeProblem prob = [] {
    RelativeProblem p;
    p.name = "neg";
    int b = c2()->object_index("b");
    p.base = {c2(), j_trivial()};
    p.left = {point(), trivial_topology(point())};
    p.right = p.base;
    p.p = constant_functor(point(), c2(), b);
    p.p_prime = identity_functor(c2());
    p.A = constant_functor(point(), c2(), b);
    p.phi = identity_phi(p);
    return p;
  }();
  return prob;
}

RelativeProblem pos_problem() {
  static RelativeProblem prob = [] {
    RelativeProblem p;
    p.name = "pos";
    int b = c2()->object_index("b");
    p.base = {c2(), j_trivial()};
    p.left = {point(), trivial_topology(point())};
    p.right = p.left;
    p.p = constant_functor(point(), c2(), b);
    p.p_prime = p.p;
    p.A = identity_functor(point());
    p.phi = identity_phi(p);
    return p;
  }();
  return prob;
}

IndexedCategory discrete_indexed() {
  static IndexedCategory ix = [] {
    IndexedCategory d;
    d.base = c2();
    CatPtr fib_a = discrete("Fa", {"x0", "x1"});
    CatPtr fib_b = discrete("Fb", {"y0", "y1"});
    d.fibers = {fib_a, fib_b};

    FinFunctor along_f;
    along_f.source = fib_b;
    along_f.target = fib_a;
    along_f.object_map = {0, 1};
    along_f.arrow_map = {fib_a->identities[0], fib_a->identities[1]};

    d.transitions.resize(c2()->num_arrows());
    d.transitions[c2()->arrow_index("id:a")] = identity_functor(fib_a);
    d.transitions[c2()->arrow_index("id:b")] = identity_functor(fib_b);
    d.transitions[c2()->arrow_index("f")] = along_f;
    return d;
  }();
  return ix;
}

}  // namespace relsite::fixtures
