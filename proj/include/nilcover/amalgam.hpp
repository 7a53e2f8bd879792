#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nilcover/liealg.hpp"
#include "nilcover/strong.hpp"

namespace nilcover {

/// Injective linear map F^source -> F^target (row i = image of e_i).
class Embedding {
 public:
  Embedding(Field field, std::size_t source_dim, std::size_t target_dim, std::vector<Vec> images)
      : map_(field, target_dim, std::move(images)), source_dim_(source_dim) {
    if (map_.rows() != source_dim) throw Error(ErrorKind::dimension, "embedding needs one image per source coordinate");
    if (rank(field, map_.row_vectors()) != source_dim) {
      throw Error(ErrorKind::precondition, "embedding is not injective");
    }
  }

  static Embedding inclusion(Field field, std::size_t source_dim, std::size_t target_dim) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < source_dim; ++i) rows.push_back(unit_vector(target_dim, i));
    return Embedding(field, source_dim, target_dim, std::move(rows));
  }

  std::size_t source_dim() const { return source_dim_; }
  std::size_t target_dim() const { return map_.cols(); }
  const Matrix& matrix() const { return map_; }

  Vec apply(const Vec& x) const { return map_.apply(x); }
  Vec apply_wedge(const Vec& w) const { return induced_map(map_).apply(w); }

  Subspace image() const {
    return Subspace::span(map_.field(), target_dim(), map_.row_vectors());
  }

  Subspace image_of(const Subspace& s) const {
    std::vector<Vec> rows;
    for (const auto& b : s.basis()) rows.push_back(apply(b));
    return Subspace::span(map_.field(), target_dim(), std::move(rows));
  }

  Subspace image_of_relations(const Subspace& rel) const {
    const Matrix lifted = induced_map(map_);
    std::vector<Vec> rows;
    for (const auto& w : rel.basis()) rows.push_back(lifted.apply(w));
    return Subspace::span(map_.field(), wedge_dim(target_dim()), std::move(rows));
  }

 private:
  Matrix map_;
  std::size_t source_dim_;
};

/// Relations preserved and reflected, and the image strong in the target.
inline bool is_strong_embedding(const GradedAlgebra& source, const GradedAlgebra& target,
                                const Embedding& e, const ScanOptions& opts = {}) {
  const Subspace img = e.image();
  if (!(e.image_of_relations(source.relations()) == relations_of(target, img))) return false;
  return is_strong(target, img, opts);
}

struct AmalgamResult {
  GradedAlgebra algebra;
  Embedding first;   ///< inclusion of a1's coordinates
  Embedding second;  ///< a2's base coordinates onto the base vectors, the rest onto new coordinates
};

/// Free amalgam of a1 and a2 over a common base. The base is given inside a1 by a list of
/// independent vectors; in a2 it is spanned by the first base.size() coordinates, the
/// i-th coordinate matching the i-th base vector. The result keeps a1's coordinates and
/// appends a2's complement; its relations are N(a1) + N(a2).
inline AmalgamResult free_amalgam(const GradedAlgebra& a1, const std::vector<Vec>& base,
                                  const GradedAlgebra& a2, const ScanOptions& opts = {}) {
  const Field& f = a1.field();
  if (!(a2.field() == f)) throw Error(ErrorKind::precondition, "amalgam factors over different fields");
  const std::size_t m = base.size();
  if (a2.dim() < m) throw Error(ErrorKind::dimension, "extension is smaller than its base");
  const Subspace b1 = a1.span(base);
  if (b1.dim() != m) throw Error(ErrorKind::precondition, "base vectors are dependent");

  std::vector<Vec> base_in_a2;
  for (std::size_t i = 0; i < m; ++i) base_in_a2.push_back(unit_vector(a2.dim(), i));
  const Subspace b2 = a2.span(base_in_a2);

  const Embedding base_map(f, m, a1.dim(), base);
  const GradedAlgebra base_alg = subalgebra(a2, base_in_a2);
  if (!(base_map.image_of_relations(base_alg.relations()) == relations_of(a1, b1))) {
    throw Error(ErrorKind::precondition, "the two factors disagree on the relations of the base");
  }
  if (!is_strong(a1, b1, opts)) throw Error(ErrorKind::precondition, "base is not strong in the first factor");
  if (!is_strong(a2, b2, opts)) throw Error(ErrorKind::precondition, "base is not strong in the second factor");

  const std::size_t n = a1.dim() + a2.dim() - m;
  std::vector<Vec> second_rows;
  for (std::size_t i = 0; i < a2.dim(); ++i) {
    second_rows.push_back(i < m ? padded(base[i], n) : unit_vector(n, a1.dim() + i - m));
  }
  Embedding first = Embedding::inclusion(f, a1.dim(), n);
  Embedding second(f, a2.dim(), n, std::move(second_rows));

  const Subspace rel = sum(embed_wedge_subspace(a1.relations(), a1.dim(), n),
                           second.image_of_relations(a2.relations()));
  std::vector<std::string> labels;
  if (!a1.labels().empty() || !a2.labels().empty()) {
    for (std::size_t i = 0; i < a1.dim(); ++i) {
      labels.push_back(a1.labels().empty() ? "x" + std::to_string(i) : a1.labels()[i]);
    }
    for (std::size_t i = m; i < a2.dim(); ++i) {
      labels.push_back(a2.labels().empty() ? "x" + std::to_string(a1.dim() + i - m)
                                           : a2.labels()[i]);
    }
  }
  GradedAlgebra out(f, n, rel, std::move(labels));
  const KReport k = in_class_K(out, opts.cap);
  if (!k.ok) {
    auto show = [](const Vec& v) {
      std::string s = "(";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s + ")";
    };
    std::string why;
    if (k.decomposable) {
      why = "independent vectors " + show(k.decomposable->first) + " and " + show(k.decomposable->second) + " commute";
    } else {
      why = "the subspace spanned by";
      for (const auto& v : k.violating->basis()) why += " " + show(v);
      why += " has predimension below 1";
    }
    throw Error(ErrorKind::amalgam_invalid, "free amalgam leaves class K: " + why);
  }
  return AmalgamResult{std::move(out), std::move(first), std::move(second)};
}

struct EmbedRecord {
  std::vector<Vec> base;      ///< workspace vectors matched to the extension's first coordinates
  GradedAlgebra extension;
  std::size_t added = 0;      ///< coordinates appended to the workspace
  std::string origin;         ///< "script" or "pseudosolution"
};

/// The growing finite algebra standing in for the rich limit. Grows only by free
/// amalgamation over strong bases; every state is validated to lie in class K.
class Workspace {
 public:
  explicit Workspace(Field field, std::size_t budget = 24, ScanOptions opts = {})
      : algebra_(GradedAlgebra::free(field, 0)), budget_(budget), opts_(opts) {}

  const GradedAlgebra& algebra() const { return algebra_; }
  const std::vector<EmbedRecord>& history() const { return history_; }
  std::size_t budget() const { return budget_; }
  const ScanOptions& scan_options() const { return opts_; }
  std::size_t dim() const { return algebra_.dim(); }

  /// Amalgamates `extension` over the subspace spanned by `base`; returns the embedding of
  /// the extension into the grown workspace. The workspace is unchanged on failure.
  Embedding embed_extension(const std::vector<Vec>& base, const GradedAlgebra& extension,
                            std::string origin = "script") {
    const std::size_t grown = algebra_.dim() + extension.dim() - std::min(extension.dim(), base.size());
    if (grown > budget_) {
      throw Error(ErrorKind::budget_exceeded, "workspace would grow to " + std::to_string(grown) +
                                                  " dimensions, above the budget " +
                                                  std::to_string(budget_));
    }
    AmalgamResult res = free_amalgam(algebra_, base, extension, opts_);
    history_.push_back(EmbedRecord{base, extension, res.algebra.dim() - algebra_.dim(), std::move(origin)});
    algebra_ = std::move(res.algebra);
    return std::move(res.second);
  }

 private:
  GradedAlgebra algebra_;
  std::vector<EmbedRecord> history_;
  std::size_t budget_;
  ScanOptions opts_;
};

inline Embedding embed_extension(Workspace& ws, const std::vector<Vec>& base,
                                 const GradedAlgebra& extension) {
  return ws.embed_extension(base, extension);
}

}  // namespace nilcover
