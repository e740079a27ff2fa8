#pragma once

#include "spg/engine.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spg {

/// A malformed run log; `line()` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, long line, const std::string& what);
    long line() const noexcept { return line_; }

private:
    long line_;
};

inline constexpr std::string_view runlog_format = "spg-runlog/1";

std::string_view init_name(InitMode m);
InitMode parse_init(std::string_view name);

/// Newline-delimited JSON: one header record (config and initial grid)
/// followed by one record per event.
void write_runlog(std::ostream& out, const RunLog& log);
std::string serialize_event(const Event& ev);

RunLog read_runlog(std::istream& in, const std::string& source = "<stream>");

void save_runlog(const std::string& path, const RunLog& log);
RunLog load_runlog(const std::string& path);

} // namespace spg
