#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace misrust {

/// Half-open byte range plus 1-based line/column endpoints.
struct Span {
    std::size_t byte_start = 0;
    std::size_t byte_end = 0; // exclusive
    std::size_t line_start = 1;
    std::size_t col_start = 1;
    std::size_t line_end = 1;
    std::size_t col_end = 1;

    bool contains(const Span& other) const {
        return byte_start <= other.byte_start && other.byte_end <= byte_end;
    }
    bool strictly_contains(const Span& other) const {
        return contains(other) && !(byte_start == other.byte_start && byte_end == other.byte_end);
    }
    bool operator==(const Span&) const = default;
};

/// Maps byte offsets to 1-based line/column positions. Columns count bytes,
/// which matches how the analyzed sources are reported back to users.
class LineTable {
public:
    LineTable() = default;

    explicit LineTable(std::string_view source) {
        line_starts_.push_back(0);
        for (std::size_t i = 0; i < source.size(); ++i) {
            if (source[i] == '\n')
                line_starts_.push_back(i + 1);
        }
    }

    std::size_t line_of(std::size_t byte) const {
        // last line whose start <= byte
        std::size_t lo = 0, hi = line_starts_.size();
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (line_starts_[mid] <= byte)
                lo = mid;
            else
                hi = mid;
        }
        return lo + 1;
    }

    std::size_t col_of(std::size_t byte) const {
        std::size_t line = line_of(byte);
        return byte - line_starts_[line - 1] + 1;
    }

    Span span(std::size_t byte_start, std::size_t byte_end) const {
        Span s;
        s.byte_start = byte_start;
        s.byte_end = byte_end;
        s.line_start = line_of(byte_start);
        s.col_start = col_of(byte_start);
        // end position points at the last byte of the range
        std::size_t last = byte_end > byte_start ? byte_end - 1 : byte_start;
        s.line_end = line_of(last);
        s.col_end = col_of(last) + (byte_end > byte_start ? 1 : 0);
        return s;
    }

    std::size_t line_count() const { return line_starts_.size(); }

private:
    std::vector<std::size_t> line_starts_;
};

} // namespace misrust
