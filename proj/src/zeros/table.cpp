#include "zetasum/errors.hpp"
#include "zetasum/theta.hpp"
#include "zetasum/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace zetasum::zeros {

namespace {

constexpr double kDefaultRadius = 1e-9;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void ZeroTable::check_ordering() const {
    for (std::size_t i = 1; i < ordinates.size(); ++i) {
        if (!(ordinates[i - 1].upper() < ordinates[i].lower())) {
            throw FormatError("zeros", "check_ordering",
                              "entries " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                  " are not strictly increasing and disjoint");
        }
    }
}

Ball ZeroTable::midpoint_after(std::size_t n) const {
    if (n < 1 || n >= ordinates.size()) {
        throw RangeError("zeros", "midpoint_after",
                         "need zeros " + std::to_string(n) + " and " + std::to_string(n + 1) + " but the table has " +
                             std::to_string(ordinates.size()));
    }
    return ((ordinates[n - 1] + ordinates[n]).ldexp(-1)).center();
}

ZeroTable read_zeros(std::istream& in, const std::string& name) {
    ZeroTable table;
    table.source = Source::imported;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto tab = text.find_first_of("\t ");
        const std::string ord = text.substr(0, tab);
        double radius = kDefaultRadius;
        try {
            Ball value = Ball::from_decimal(ord);
            if (tab != std::string::npos) {
                const Ball r = Ball::from_decimal(trim(text.substr(tab + 1)));
                if (r.is_negative()) throw FormatError("zeros", "import_zeros", "negative radius");
                radius = r.mag_upper();
            }
            table.ordinates.push_back(value.widened(radius));
        } catch (const ParseError& e) {
            throw FormatError("zeros", "import_zeros",
                              name + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (table.ordinates.empty()) throw FormatError("zeros", "import_zeros", name + ": empty zero table");
    try {
        table.check_ordering();
    } catch (const FormatError& e) {
        throw FormatError("zeros", "import_zeros", name + ": " + e.what());
    }
    if (table.ordinates.front().lower() <= 14.0) {
        throw CompletenessError("zeros", "import_zeros", name + ": first entry is not the first zero (14 < gamma_1)");
    }

    // N(gamma_n) = n - 1/2 = theta(gamma_n)/pi + 1 + S(gamma_n); a missing or
    // extra zero moves the implied S by a full unit.
    const std::size_t n = table.ordinates.size();
    const Ball& last = table.ordinates.back();
    const Ball implied_s = Ball(static_cast<long>(n)) - Ball(1).ldexp(-1) -
                           theta::theta_reference(last.center()) / Ball::pi() - Ball(1);
    if (!(implied_s.mag_upper() < 1.0)) {
        throw CompletenessError("zeros", "import_zeros",
                                name + ": " + std::to_string(n) + " entries disagree with the zero count at " +
                                    last.to_string());
    }
    table.height_max = std::nextafter(last.upper(), INFINITY);
    return table;
}

ZeroTable import_zeros(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("zeros", "import_zeros", "cannot open " + path);
    return read_zeros(in, path);
}

void write_zeros(const ZeroTable& table, std::ostream& out) {
    out << "# zetasum zero table: " << table.size() << " zeros, complete through " << table.height_max << "\n";
    char buf[64];
    for (const Ball& z : table.ordinates) {
        // 22 decimals; the printing error is added to the radius
        const double radius = z.rad() * (1.0 + 1e-3) + 1e-22;
        std::snprintf(buf, sizeof buf, "%.3e", radius);
        out << z.mid_fixed(22) << "\t" << buf << "\n";
    }
}

Ball L_of(const Ball& T) {
    if (!T.is_positive()) throw DomainError("zeros", "L_of", "requires T > 0");
    const Ball x = T / Ball::pi().ldexp(1);
    return x * (numeric::log(x) - Ball(1)) + Ball::from_rational(mpq_class(7, 8));
}

CountResult count_N(const ZeroTable& table, double T) {
    if (T > table.height_max) {
        throw RangeError("zeros", "count_N", "T beyond the certified height of the table");
    }
    const Ball t = Ball::from_double(T);
    long below = 0;
    bool inside = false;
    for (const Ball& z : table.ordinates) {
        if (z.upper() < T) {
            ++below;
        } else if (z.contains(t.mid())) {
            inside = true;
        } else {
            break;
        }
    }
    CountResult r;
    r.value = mpq_class(below);
    if (inside) {
        r.value += mpq_class(1, 2);
        r.ambiguous = true;
    }
    return r;
}

Ball Q_of(const ZeroTable& table, const Ball& T) {
    if (T.upper() > table.height_max) throw RangeError("zeros", "Q_of", "T beyond the certified height of the table");
    const auto it = std::partition_point(table.ordinates.begin(), table.ordinates.end(),
                                         [&](const Ball& z) { return z.upper() < T.lower(); });
    if (it != table.ordinates.end() && it->overlaps(T)) {
        throw AmbiguityError("zeros", "Q_of", "T overlaps the zero enclosure " + it->to_string());
    }
    const long n = static_cast<long>(it - table.ordinates.begin());
    return Ball(n) - L_of(T);
}

}  // namespace zetasum::zeros
