#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cellstress::data {

inline constexpr int kSlotSeconds = 300;           // 5-minute resolution
inline constexpr int kDefaultWindowSlots = 2016;   // one week of 5-minute slots

struct CellRecord {
    std::string cell_id;
    double lon = 0.0;
    double lat = 0.0;
    double capacity = 0.0;  // max simultaneous clients the cell safely handles

    bool operator==(const CellRecord&) const = default;
};

struct ClientRecord {
    std::string client_id;
    std::string mosaic_segment;
    std::string telenor_segment;

    bool operator==(const ClientRecord&) const = default;
};

enum class Segmentation { mosaic, telenor };

std::string_view segmentation_name(Segmentation s);
Segmentation parse_segmentation(std::string_view name);

// One normalized observation: client seen at a cell during a 5-minute slot.
// Indices are dense positions into the dataset catalogs.
struct CdrEvent {
    std::uint32_t client = 0;
    std::uint32_t slot = 0;
    std::uint32_t cell = 0;

    bool operator==(const CdrEvent&) const = default;
};

struct IngestStats {
    std::size_t event_rows_read = 0;
    std::size_t duplicate_events = 0;  // (client, slot) collisions collapsed to the last row

    bool operator==(const IngestStats&) const = default;
};

class Dataset {
public:
    Dataset() = default;
    // Validates referential integrity, normalizes duplicates (last row wins)
    // and sorts events by (client, slot).
    Dataset(std::vector<CellRecord> cells, std::vector<ClientRecord> clients,
            std::vector<CdrEvent> events, int window_slots,
            IngestStats stats = {});

    const std::vector<CellRecord>& cells() const { return cells_; }
    const std::vector<ClientRecord>& clients() const { return clients_; }
    const std::vector<CdrEvent>& events() const { return events_; }
    int window_slots() const { return window_slots_; }
    const IngestStats& ingest_stats() const { return stats_; }

    std::optional<std::uint32_t> cell_index(std::string_view id) const;
    std::optional<std::uint32_t> client_index(std::string_view id) const;

    // Half-open range [first, last) of this client's events in events().
    std::pair<std::size_t, std::size_t> client_events(std::uint32_t client) const;

    bool operator==(const Dataset& other) const;

private:
    std::vector<CellRecord> cells_;
    std::vector<ClientRecord> clients_;
    std::vector<CdrEvent> events_;
    int window_slots_ = kDefaultWindowSlots;
    IngestStats stats_;
    std::unordered_map<std::string, std::uint32_t> cell_by_id_;
    std::unordered_map<std::string, std::uint32_t> client_by_id_;
    std::vector<std::size_t> client_event_begin_;  // size clients+1
};

// Reads the three CSV files (schemas in the README) into a validated Dataset.
// Timestamps are either integer slot indices or ISO-8601 date-times; date-times
// snap down to the 5-minute slot grid anchored at midnight of the earliest day.
Dataset parse_dataset(const std::string& cells_path, const std::string& clients_path,
                      const std::string& events_path, int window_slots = kDefaultWindowSlots);

// Writes the canonical serialization (events carry integer slot indices).
void write_dataset(const Dataset& d, const std::string& cells_path,
                   const std::string& clients_path, const std::string& events_path);

// Drops the given clients and their events; the cell catalog is untouched.
Dataset remove_clients(const Dataset& d, const std::set<std::string>& client_ids);

}  // namespace cellstress::data
