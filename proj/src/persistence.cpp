#include "ttda/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "ttda/errors.hpp"
#include "ttda/format.hpp"

namespace ttda {
namespace {

std::uint64_t pack(const std::array<int, 3>& v) {
  std::uint64_t key = 0;
  for (int x : v) key = (key << 21) | static_cast<std::uint64_t>(x + 1);
  return key;
}

std::vector<std::array<int, 3>> faces_of(const FilteredSimplex& s) {
  const auto& v = s.vertices;
  if (s.dim == 1) return {{v[0], -1, -1}, {v[1], -1, -1}};
  if (s.dim == 2) return {{v[0], v[1], -1}, {v[0], v[2], -1}, {v[1], v[2], -1}};
  return {};
}

// a := a xor b on sorted index lists.
void add_column(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(scratch));
  a.swap(scratch);
}

}  // namespace

std::size_t Filtration::count(int dim) const {
  return static_cast<std::size_t>(std::count_if(
      simplices.begin(), simplices.end(), [dim](const auto& s) { return s.dim == dim; }));
}

Filtration rips_filtration(const DistanceMatrix& m, int max_dim, std::optional<double> threshold) {
  if (m.size() == 0) throw DomainError("Rips filtration of an empty point set");
  if (max_dim < 0 || max_dim > 2) throw DomainError("Rips filtration supports max_dim 0..2");
  if (threshold && !(*threshold > 0.0)) throw DomainError("Rips threshold must be positive");
  if (m.size() >= (1u << 20)) throw DomainError("too many points for an explicit filtration");
  const double thr = threshold ? *threshold : enclosing_radius(m);
  const int n = static_cast<int>(m.size());

  Filtration f;
  f.vertex_count = m.size();
  f.threshold = thr;
  for (int i = 0; i < n; ++i) f.simplices.push_back({{i, -1, -1}, 0, 0.0});
  if (max_dim >= 1) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double d = m(i, j);
        if (d <= thr) f.simplices.push_back({{i, j, -1}, 1, d});
      }
    }
  }
  if (max_dim >= 2) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double dij = m(i, j);
        if (dij > thr) continue;
        for (int k = j + 1; k < n; ++k) {
          const double dik = m(i, k);
          const double djk = m(j, k);
          if (dik > thr || djk > thr) continue;
          f.simplices.push_back({{i, j, k}, 2, std::max({dij, dik, djk})});
        }
      }
    }
  }
  std::sort(f.simplices.begin(), f.simplices.end(),
            [](const auto& a, const auto& b) { return a.key() < b.key(); });
  return f;
}

void PersistenceDiagram::canonicalize() {
  std::sort(features.begin(), features.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dim, a.birth, a.death) < std::tie(b.dim, b.birth, b.death);
  });
}

PersistenceDiagram PersistenceDiagram::of_dimension(int dim) const {
  PersistenceDiagram out;
  for (const auto& f : features) {
    if (f.dim == dim) out.features.push_back(f);
  }
  return out;
}

std::size_t PersistenceDiagram::count(int dim) const {
  return static_cast<std::size_t>(std::count_if(
      features.begin(), features.end(), [dim](const auto& f) { return f.dim == dim; }));
}

bool PersistenceDiagram::all_finite() const {
  return std::all_of(features.begin(), features.end(), [](const auto& f) { return f.finite(); });
}

PersistenceDiagram persistence(const Filtration& f) {
  const auto& simplices = f.simplices;
  const std::size_t total = simplices.size();
  if (total >= (1ull << 32)) throw DomainError("filtration too large");

  std::unordered_map<std::uint64_t, std::uint32_t> position;
  position.reserve(total);
  for (std::uint32_t i = 0; i < total; ++i) {
    const auto& s = simplices[i];
    if (s.dim < 0 || s.dim > 2) throw IntegrityError("simplex dimension outside 0..2");
    if (i > 0 && s.value < simplices[i - 1].value) {
      throw IntegrityError("filtration values decrease at position " + std::to_string(i));
    }
    if (!position.emplace(pack(s.vertices), i).second) {
      throw IntegrityError("duplicate simplex at position " + std::to_string(i));
    }
  }

  // Boundary columns as sorted row positions.
  std::vector<std::vector<std::uint32_t>> boundary(total);
  for (std::uint32_t j = 0; j < total; ++j) {
    for (const auto& face : faces_of(simplices[j])) {
      const auto it = position.find(pack(face));
      if (it == position.end() || it->second >= j ||
          simplices[it->second].value > simplices[j].value) {
        throw IntegrityError("face of simplex at position " + std::to_string(j) +
                             " is missing or enters after it");
      }
      boundary[j].push_back(it->second);
    }
    std::sort(boundary[j].begin(), boundary[j].end());
  }

  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> owner_of_low(total, kNone);
  std::vector<bool> cleared(total, false);
  std::vector<std::vector<std::uint32_t>> reduced(total);
  std::vector<std::uint32_t> scratch;

  // Twist: reduce the top dimension first; every pivot it finds marks a
  // column of the dimension below that must reduce to zero.
  for (int dim = 2; dim >= 1; --dim) {
    for (std::uint32_t j = 0; j < total; ++j) {
      if (simplices[j].dim != dim || cleared[j]) continue;
      auto column = std::move(boundary[j]);
      while (!column.empty()) {
        const auto owner = owner_of_low[column.back()];
        if (owner == kNone) break;
        add_column(column, reduced[static_cast<std::size_t>(owner)], scratch);
      }
      if (column.empty()) continue;
      const auto low = column.back();
      owner_of_low[low] = j;
      if (dim == 2) cleared[low] = true;
      reduced[j] = std::move(column);
    }
  }

  PersistenceDiagram diagram;
  for (std::uint32_t i = 0; i < total; ++i) {
    const auto& s = simplices[i];
    if (s.dim > 1) continue;
    const bool negative = !reduced[i].empty();
    if (negative) continue;
    const auto owner = owner_of_low[i];
    if (owner == kNone) {
      diagram.features.push_back({s.value, kInfinity, s.dim});
    } else {
      const double death = simplices[static_cast<std::size_t>(owner)].value;
      if (death > s.value) diagram.features.push_back({s.value, death, s.dim});
    }
  }
  diagram.canonicalize();
  return diagram;
}

std::size_t betti_curve(const PersistenceDiagram& d, int k, double r) {
  return static_cast<std::size_t>(std::count_if(
      d.features.begin(), d.features.end(),
      [&](const auto& f) { return f.dim == k && f.birth <= r && r < f.death; }));
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& d) {
  out << "dim,birth,death\n";
  for (const auto& f : d.features) {
    out << f.dim << ',' << format_double(f.birth) << ',' << format_double(f.death) << '\n';
  }
}

PersistenceDiagram read_diagram_csv(std::istream& in) {
  PersistenceDiagram d;
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim,birth,death", 0) != 0) {
    throw FormatError("diagram CSV must start with header 'dim,birth,death'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string dim, birth, death;
    if (!std::getline(ss, dim, ',') || !std::getline(ss, birth, ',') ||
        !std::getline(ss, death, ',')) {
      throw FormatError("diagram CSV line " + std::to_string(line_no) + " needs 3 fields");
    }
    try {
      d.features.push_back({parse_double(birth), parse_double(death), std::stoi(dim)});
    } catch (const std::exception&) {
      throw FormatError("diagram CSV line " + std::to_string(line_no) + " is malformed");
    }
  }
  return d;
}

}  // namespace ttda
