#include "relsite/comma.hpp"

#include <map>
#include <stdexcept>
#include <tuple>

namespace relsite {

int CommaCategory::find_object(int left, int right, int arrow) const {
  for (int i = 0; i < static_cast<int>(object_tags.size()); ++i) {
    const auto& t = object_tags[i];
    if (t.left == left && t.right == right && t.arrow == arrow) return i;
  }
  return -1;
}

CommaCategory comma_category(std::string name, const FinFunctor& F, const FinFunctor& G) {
  if (F.target != G.target) throw std::invalid_argument("comma_category: legs land in different categories");
  const auto& A = *F.source;
  const auto& B = *G.source;
  const auto& C = *F.target;

  CommaCategory result;
  result.left_leg = F;
  result.right_leg = G;

  std::vector<std::string> obj_ids;
  std::map<std::tuple<int, int, int>, int> obj_idx;
  for (int a = 0; a < A.num_objects(); ++a) {
    for (int b = 0; b < B.num_objects(); ++b) {
      for (int h : C.hom(F.object_map[a], G.object_map[b])) {
        obj_idx[{a, b, h}] = static_cast<int>(result.object_tags.size());
        result.object_tags.push_back({a, b, h});
        obj_ids.push_back("(" + A.objects[a] + "|" + B.objects[b] + "|" + C.arrows[h].id + ")");
      }
    }
  }

  const int n_obj = static_cast<int>(result.object_tags.size());
  std::vector<Arrow> arrows;
  std::vector<int> identities(n_obj, -1);
  std::map<std::tuple<int, int, int, int>, int> arr_idx;  // (src, dst, alpha, beta)
  for (int s = 0; s < n_obj; ++s) {
    const auto& st = result.object_tags[s];
    for (int d = 0; d < n_obj; ++d) {
      const auto& dt = result.object_tags[d];
      for (int alpha : A.hom(st.left, dt.left)) {
        for (int beta : B.hom(st.right, dt.right)) {
          // square: h_dst after F(alpha) == G(beta) after h_src
          if (C.compose(dt.arrow, F.arrow_map[alpha]) != C.compose(G.arrow_map[beta], st.arrow)) continue;
          int idx = static_cast<int>(arrows.size());
          arr_idx[{s, d, alpha, beta}] = idx;
          std::string id = "[" + A.arrows[alpha].id + "|" + B.arrows[beta].id + "]" + obj_ids[s] + ">" + obj_ids[d];
          arrows.push_back({std::move(id), s, d});
          result.arrow_tags.push_back({alpha, beta});
          if (s == d && alpha == A.identities[st.left] && beta == B.identities[st.right]) identities[s] = idx;
        }
      }
    }
  }

  const int n_arr = static_cast<int>(arrows.size());
  std::vector<int> table(static_cast<size_t>(n_arr) * n_arr, -1);
  for (int f = 0; f < n_arr; ++f) {
    for (int g = 0; g < n_arr; ++g) {
      if (arrows[f].dst != arrows[g].src) continue;
      int alpha = A.compose(result.arrow_tags[g].left, result.arrow_tags[f].left);
      int beta = B.compose(result.arrow_tags[g].right, result.arrow_tags[f].right);
      table[static_cast<size_t>(g) * n_arr + f] = arr_idx.at({arrows[f].src, arrows[g].dst, alpha, beta});
    }
  }

  result.carrier = make_category(std::move(name), std::move(obj_ids), std::move(arrows),
                                 std::move(identities), std::move(table));

  FinFunctor pl{result.carrier, F.source, {}, {}};
  FinFunctor pr{result.carrier, G.source, {}, {}};
  for (const auto& t : result.object_tags) {
    pl.object_map.push_back(t.left);
    pr.object_map.push_back(t.right);
  }
  for (const auto& t : result.arrow_tags) {
    pl.arrow_map.push_back(t.left);
    pr.arrow_map.push_back(t.right);
  }
  result.proj_left = std::move(pl);
  result.proj_right = std::move(pr);
  return result;
}

CommaCategory comma_over_object(const FinFunctor& p, int c) {
  auto one = terminal_category();
  return comma_category("(" + p.source->name + " over " + p.target->objects[c] + ")", p,
                        constant_functor(one, p.target, c));
}

CommaCategory comma_over_identity(const FinFunctor& p) {
  return comma_category("(" + p.source->name + " over " + p.target->name + ")", p,
                        identity_functor(p.target));
}

CommaCategory arrow_comma(int d0, const FinFunctor& F) {
  auto one = terminal_category();
  return comma_category("(" + F.target->objects[d0] + " under " + F.source->name + ")",
                        constant_functor(one, F.target, d0), F);
}

}  // namespace relsite
