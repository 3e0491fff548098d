#include "msim/data/lobster.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "msim/util/csv.hpp"

namespace msim::data {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    // trailing blank lines are not rows
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

// "34200.189000000" -> ns after midnight, exact
bool parse_lobster_time(std::string_view s, NanoTime& out) {
    const std::size_t dot = s.find('.');
    std::int64_t secs = 0;
    if (!parse_i64(s.substr(0, dot == std::string_view::npos ? s.size() : dot), secs))
        return false;
    std::int64_t frac_ns = 0;
    if (dot != std::string_view::npos) {
        std::string_view frac = s.substr(dot + 1);
        if (frac.empty() || frac.size() > 9) return false;
        std::int64_t digits = 0;
        if (!parse_i64(frac, digits)) return false;
        frac_ns = digits;
        for (std::size_t i = frac.size(); i < 9; ++i) frac_ns *= 10;
    }
    out = secs * kNsPerSec + frac_ns;
    return true;
}

} // namespace

std::string format_lobster_time(NanoTime t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld.%09lld", static_cast<long long>(t / kNsPerSec),
                  static_cast<long long>(t % kNsPerSec));
    return buf;
}

LobsterData parse_lobster(const std::string& message_path, const std::string& book_path) {
    const auto msg_lines = read_lines(message_path);
    const auto book_lines = read_lines(book_path);
    if (msg_lines.size() != book_lines.size())
        throw std::runtime_error("row-count mismatch: " + message_path + " has " +
                                 std::to_string(msg_lines.size()) + " rows, " + book_path +
                                 " has " + std::to_string(book_lines.size()));

    LobsterData data;
    data.events.reserve(msg_lines.size());
    NanoTime prev_time = -1;

    for (std::size_t i = 0; i < msg_lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        auto bad = [&](const std::string& file, const std::string& reason) {
            data.issues.push_back(ParseIssue{line_no, file, reason});
        };

        const auto mf = split_csv_line(msg_lines[i]);
        if (mf.size() != 6) {
            bad(message_path, "expected 6 fields, got " + std::to_string(mf.size()));
            continue;
        }
        LobsterMessage msg;
        std::int64_t type = 0, order_id = 0, direction = 0;
        if (!parse_lobster_time(mf[0], msg.time) || !parse_i64(mf[1], type) ||
            !parse_i64(mf[2], order_id) || !parse_i64(mf[3], msg.size) ||
            !parse_i64(mf[4], msg.price) || !parse_i64(mf[5], direction)) {
            bad(message_path, "unparseable field");
            continue;
        }
        msg.type = static_cast<int>(type);
        msg.order_id = static_cast<std::uint64_t>(order_id);
        msg.direction = static_cast<int>(direction);
        if (msg.type < kNewOrder || msg.type > kHalt) {
            bad(message_path, "unknown message type " + std::to_string(msg.type));
            continue;
        }
        if (direction != -1 && direction != 1) {
            bad(message_path, "direction must be -1 or +1");
            continue;
        }
        if (msg.size < 0) {
            bad(message_path, "negative size");
            continue;
        }
        if (msg.time < prev_time) {
            bad(message_path, "timestamp regression");
            continue;
        }

        const auto bf = split_csv_line(book_lines[i]);
        if (bf.size() < 4 || bf.size() % 4 != 0) {
            bad(book_path, "expected a multiple of 4 fields, got " + std::to_string(bf.size()));
            continue;
        }
        LobsterBookRow row;
        row.levels.resize(bf.size() / 4);
        bool ok = true;
        for (std::size_t l = 0; ok && l < row.levels.size(); ++l)
            for (int c = 0; ok && c < 4; ++c)
                ok = parse_i64(bf[l * 4 + c], row.levels[l][c]);
        if (!ok) {
            bad(book_path, "unparseable field");
            continue;
        }
        for (std::size_t l = 1; ok && l < row.levels.size(); ++l) {
            if (row.levels[l][0] < LobsterBookRow::kAskSentinel &&
                row.levels[l][0] <= row.levels[l - 1][0])
                ok = false;
            if (row.levels[l][2] > LobsterBookRow::kBidSentinel &&
                row.levels[l][2] >= row.levels[l - 1][2])
                ok = false;
        }
        if (!ok) {
            bad(book_path, "levels not strictly ordered");
            continue;
        }

        prev_time = msg.time;
        data.events.push_back(LobsterEvent{msg, std::move(row)});
    }
    return data;
}

void write_lobster(const std::vector<LobsterEvent>& events, const std::string& message_path,
                   const std::string& book_path, int depth) {
    std::ofstream msg_out(message_path);
    std::ofstream book_out(book_path);
    if (!msg_out || !book_out)
        throw std::runtime_error("cannot write " + message_path + " / " + book_path);

    for (const LobsterEvent& ev : events) {
        msg_out << format_lobster_time(ev.msg.time) << ',' << ev.msg.type << ','
                << ev.msg.order_id << ',' << ev.msg.size << ',' << ev.msg.price << ','
                << ev.msg.direction << '\n';
        for (int l = 0; l < depth; ++l) {
            std::array<std::int64_t, 4> level = {LobsterBookRow::kAskSentinel, 0,
                                                 LobsterBookRow::kBidSentinel, 0};
            if (l < static_cast<int>(ev.book.levels.size())) level = ev.book.levels[l];
            book_out << level[0] << ',' << level[1] << ',' << level[2] << ',' << level[3];
            book_out << (l + 1 < depth ? ',' : '\n');
        }
    }
}

} // namespace msim::data
