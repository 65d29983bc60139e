#include "gsde/csv_io.hpp"

#include <charconv>
#include <system_error>

#include "gsde/errors.hpp"

namespace gsde {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) {
        throw Error("failed to format a double");
    }
    return std::string(buf, res.ptr);
}

void write_path_csv_header(std::ostream& out) { out << kPathCsvHeader << '\n'; }

void append_path_csv(std::ostream& out, int k, int j, const SamplePath& path) {
    path.validate();
    const std::size_t n = path.steps();
    for (std::size_t i = 0; i <= n; ++i) {
        const double db = i == 0 ? 0.0 : path.increments_b[i - 1];
        const double var = i == 0 ? path.scenario.per_step_var[0]
                                  : path.scenario.per_step_var[i - 1];
        out << k << ',' << j << ',' << i << ',' << format_double(path.times[i]) << ','
            << format_double(path.values[i]) << ',' << format_double(db) << ','
            << format_double(var) << '\n';
    }
}

}  // namespace gsde
