#include "cellstress/data_model.hpp"

#include "cellstress/csv.hpp"
#include "cellstress/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>

namespace cellstress::data {

std::string_view segmentation_name(Segmentation s) {
    return s == Segmentation::mosaic ? "mosaic" : "telenor";
}

Segmentation parse_segmentation(std::string_view name) {
    if (name == "mosaic") return Segmentation::mosaic;
    if (name == "telenor") return Segmentation::telenor;
    throw InvalidConfigError("unknown segmentation system: " + std::string(name));
}

Dataset::Dataset(std::vector<CellRecord> cells, std::vector<ClientRecord> clients,
                 std::vector<CdrEvent> events, int window_slots, IngestStats stats)
    : cells_(std::move(cells)),
      clients_(std::move(clients)),
      events_(std::move(events)),
      window_slots_(window_slots),
      stats_(stats) {
    if (window_slots_ <= 0) throw InvalidConfigError("window length must be positive");

    cell_by_id_.reserve(cells_.size());
    for (std::uint32_t j = 0; j < cells_.size(); ++j) {
        if (cells_[j].capacity <= 0.0) {
            throw InvalidConfigError("cell " + cells_[j].cell_id + " has non-positive capacity");
        }
        if (!cell_by_id_.emplace(cells_[j].cell_id, j).second) {
            throw InvalidConfigError("duplicate cell_id: " + cells_[j].cell_id);
        }
    }
    client_by_id_.reserve(clients_.size());
    for (std::uint32_t i = 0; i < clients_.size(); ++i) {
        if (!client_by_id_.emplace(clients_[i].client_id, i).second) {
            throw InvalidConfigError("duplicate client_id: " + clients_[i].client_id);
        }
    }

    for (const CdrEvent& e : events_) {
        if (e.client >= clients_.size()) throw UnknownClientError("#" + std::to_string(e.client));
        if (e.cell >= cells_.size()) throw UnknownCellError("#" + std::to_string(e.cell));
        if (e.slot >= static_cast<std::uint32_t>(window_slots_)) {
            throw InvalidConfigError("event slot " + std::to_string(e.slot) +
                                     " outside window of " + std::to_string(window_slots_));
        }
    }

    // Last occurrence wins for a (client, slot) pair; stable_sort keeps file order
    // inside each pair so the normalization below can pick it.
    std::stable_sort(events_.begin(), events_.end(),
                     [](const CdrEvent& a, const CdrEvent& b) {
                         return a.client != b.client ? a.client < b.client : a.slot < b.slot;
                     });
    std::vector<CdrEvent> normalized;
    normalized.reserve(events_.size());
    for (std::size_t k = 0; k < events_.size(); ++k) {
        if (k + 1 < events_.size() && events_[k + 1].client == events_[k].client &&
            events_[k + 1].slot == events_[k].slot) {
            ++stats_.duplicate_events;
            continue;
        }
        normalized.push_back(events_[k]);
    }
    events_ = std::move(normalized);

    client_event_begin_.assign(clients_.size() + 1, 0);
    for (const CdrEvent& e : events_) ++client_event_begin_[e.client + 1];
    for (std::size_t i = 1; i < client_event_begin_.size(); ++i) {
        client_event_begin_[i] += client_event_begin_[i - 1];
    }
}

std::optional<std::uint32_t> Dataset::cell_index(std::string_view id) const {
    auto it = cell_by_id_.find(std::string(id));
    if (it == cell_by_id_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> Dataset::client_index(std::string_view id) const {
    auto it = client_by_id_.find(std::string(id));
    if (it == client_by_id_.end()) return std::nullopt;
    return it->second;
}

std::pair<std::size_t, std::size_t> Dataset::client_events(std::uint32_t client) const {
    return {client_event_begin_[client], client_event_begin_[client + 1]};
}

bool Dataset::operator==(const Dataset& other) const {
    return cells_ == other.cells_ && clients_ == other.clients_ && events_ == other.events_ &&
           window_slots_ == other.window_slots_;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

// Days since 1970-01-01 for a civil date; standard Howard Hinnant construction.
long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

struct RawTimestamp {
    bool is_slot = false;
    long long slot = 0;       // when is_slot
    long long epoch_sec = 0;  // otherwise
};

int parse_fixed_int(const std::string& s, std::size_t pos, std::size_t len, std::size_t line) {
    int value = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (i >= s.size() || s[i] < '0' || s[i] > '9') {
            throw MalformedRowError(line, "bad timestamp '" + s + "'");
        }
        value = value * 10 + (s[i] - '0');
    }
    return value;
}

// Accepted forms: integer slot index, "HH:MM:SS" (day zero),
// "YYYY-MM-DD HH:MM:SS" / "YYYY-MM-DDTHH:MM:SS" with optional trailing 'Z'.
RawTimestamp parse_timestamp(const std::string& text, std::size_t line) {
    if (all_digits(text) && text.size() <= 9) {
        RawTimestamp t;
        t.is_slot = true;
        t.slot = csv::parse_integer(text, line, "timestamp");
        return t;
    }
    std::string s = text;
    if (!s.empty() && s.back() == 'Z') s.pop_back();

    RawTimestamp t;
    if (s.size() == 8 && s[2] == ':' && s[5] == ':') {
        int hh = parse_fixed_int(s, 0, 2, line);
        int mm = parse_fixed_int(s, 3, 2, line);
        int ss = parse_fixed_int(s, 6, 2, line);
        if (hh > 23 || mm > 59 || ss > 59) throw MalformedRowError(line, "bad timestamp '" + text + "'");
        t.epoch_sec = hh * 3600LL + mm * 60LL + ss;
        return t;
    }
    if (s.size() == 19 && s[4] == '-' && s[7] == '-' && (s[10] == 'T' || s[10] == ' ') &&
        s[13] == ':' && s[16] == ':') {
        int year = parse_fixed_int(s, 0, 4, line);
        int month = parse_fixed_int(s, 5, 2, line);
        int day = parse_fixed_int(s, 8, 2, line);
        int hh = parse_fixed_int(s, 11, 2, line);
        int mm = parse_fixed_int(s, 14, 2, line);
        int ss = parse_fixed_int(s, 17, 2, line);
        if (month < 1 || month > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 59) {
            throw MalformedRowError(line, "bad timestamp '" + text + "'");
        }
        t.epoch_sec = days_from_civil(year, month, day) * 86400LL + hh * 3600LL + mm * 60LL + ss;
        return t;
    }
    throw MalformedRowError(line, "unrecognized timestamp '" + text + "'");
}

struct RawEvent {
    std::uint32_t client;
    std::uint32_t cell;
    RawTimestamp when;
    std::size_t line;
};

}  // namespace

Dataset parse_dataset(const std::string& cells_path, const std::string& clients_path,
                      const std::string& events_path, int window_slots) {
    std::vector<CellRecord> cells;
    std::unordered_map<std::string, std::uint32_t> cell_idx;
    {
        csv::Reader reader(cells_path, {"cell_id", "lon", "lat", "capacity"});
        std::vector<std::string> f;
        while (reader.next(f)) {
            CellRecord c;
            c.cell_id = f[0];
            if (c.cell_id.empty()) throw MalformedRowError(reader.line(), "empty cell_id");
            c.lon = csv::parse_number(f[1], reader.line(), "lon");
            c.lat = csv::parse_number(f[2], reader.line(), "lat");
            c.capacity = csv::parse_number(f[3], reader.line(), "capacity");
            if (c.capacity <= 0.0) throw MalformedRowError(reader.line(), "capacity must be positive");
            if (!cell_idx.emplace(c.cell_id, cells.size()).second) {
                throw MalformedRowError(reader.line(), "duplicate cell_id: " + c.cell_id);
            }
            cells.push_back(std::move(c));
        }
    }

    std::vector<ClientRecord> clients;
    std::unordered_map<std::string, std::uint32_t> client_idx;
    {
        csv::Reader reader(clients_path, {"client_id", "mosaic_segment", "telenor_segment"});
        std::vector<std::string> f;
        while (reader.next(f)) {
            if (f[0].empty()) throw MalformedRowError(reader.line(), "empty client_id");
            if (f[1].empty() || f[2].empty()) {
                throw MalformedRowError(reader.line(), "empty segment label");
            }
            if (!client_idx.emplace(f[0], clients.size()).second) {
                throw MalformedRowError(reader.line(), "duplicate client_id: " + f[0]);
            }
            clients.push_back({f[0], f[1], f[2]});
        }
    }

    std::vector<RawEvent> raw;
    IngestStats stats;
    {
        csv::Reader reader(events_path, {"client_id", "timestamp", "cell_id"});
        std::vector<std::string> f;
        while (reader.next(f)) {
            auto ci = client_idx.find(f[0]);
            if (ci == client_idx.end()) throw UnknownClientError(f[0]);
            auto ji = cell_idx.find(f[2]);
            if (ji == cell_idx.end()) throw UnknownCellError(f[2]);
            raw.push_back({ci->second, ji->second, parse_timestamp(f[1], reader.line()), reader.line()});
            ++stats.event_rows_read;
        }
    }
    if (raw.empty()) throw EmptyDatasetError();

    // Date-time stamps are anchored at midnight of the earliest day seen, so the
    // slot grid lines up with the clock (00:05-00:10 is slot 1).
    long long min_epoch = std::numeric_limits<long long>::max();
    for (const RawEvent& e : raw) {
        if (!e.when.is_slot) min_epoch = std::min(min_epoch, e.when.epoch_sec);
    }
    const long long day_start =
        min_epoch == std::numeric_limits<long long>::max()
            ? 0
            : (min_epoch >= 0 ? (min_epoch / 86400) * 86400 : ((min_epoch - 86399) / 86400) * 86400);

    std::vector<CdrEvent> events;
    events.reserve(raw.size());
    for (const RawEvent& e : raw) {
        long long slot = e.when.is_slot ? e.when.slot : (e.when.epoch_sec - day_start) / kSlotSeconds;
        if (slot < 0 || slot >= window_slots) {
            throw MalformedRowError(e.line, "timestamp outside the " + std::to_string(window_slots) +
                                                "-slot analysis window (slot " + std::to_string(slot) + ")");
        }
        events.push_back({e.client, static_cast<std::uint32_t>(slot), e.cell});
    }

    return Dataset(std::move(cells), std::move(clients), std::move(events), window_slots, stats);
}

void write_dataset(const Dataset& d, const std::string& cells_path,
                   const std::string& clients_path, const std::string& events_path) {
    {
        std::ofstream out(cells_path);
        if (!out) throw Error("cannot write " + cells_path);
        out << "cell_id,lon,lat,capacity\n";
        for (const CellRecord& c : d.cells()) {
            out << c.cell_id << ',' << csv::format_number(c.lon) << ',' << csv::format_number(c.lat)
                << ',' << csv::format_number(c.capacity) << '\n';
        }
    }
    {
        std::ofstream out(clients_path);
        if (!out) throw Error("cannot write " + clients_path);
        out << "client_id,mosaic_segment,telenor_segment\n";
        for (const ClientRecord& c : d.clients()) {
            out << c.client_id << ',' << c.mosaic_segment << ',' << c.telenor_segment << '\n';
        }
    }
    {
        std::ofstream out(events_path);
        if (!out) throw Error("cannot write " + events_path);
        out << "client_id,timestamp,cell_id\n";
        for (const CdrEvent& e : d.events()) {
            out << d.clients()[e.client].client_id << ',' << e.slot << ','
                << d.cells()[e.cell].cell_id << '\n';
        }
    }
}

Dataset remove_clients(const Dataset& d, const std::set<std::string>& client_ids) {
    std::vector<bool> drop(d.clients().size(), false);
    for (const std::string& id : client_ids) {
        auto idx = d.client_index(id);
        if (!idx) throw UnknownClientError(id);
        drop[*idx] = true;
    }

    std::vector<ClientRecord> kept;
    kept.reserve(d.clients().size() - client_ids.size());
    std::vector<std::uint32_t> remap(d.clients().size(), 0);
    for (std::uint32_t i = 0; i < d.clients().size(); ++i) {
        if (drop[i]) continue;
        remap[i] = static_cast<std::uint32_t>(kept.size());
        kept.push_back(d.clients()[i]);
    }

    std::vector<CdrEvent> events;
    events.reserve(d.events().size());
    for (const CdrEvent& e : d.events()) {
        if (drop[e.client]) continue;
        events.push_back({remap[e.client], e.slot, e.cell});
    }

    return Dataset(d.cells(), std::move(kept), std::move(events), d.window_slots(),
                   d.ingest_stats());
}

}  // namespace cellstress::data
