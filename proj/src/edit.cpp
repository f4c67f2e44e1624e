#include "amrt/edit.hpp"

namespace amrt {

EditOp inverse(const EditOp& op) {
    return std::visit(
        [](const auto& o) -> EditOp {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, AddNodeOp>) {
                return RemoveNodeOp{o.id, o.node};
            } else if constexpr (std::is_same_v<T, RemoveNodeOp>) {
                return AddNodeOp{o.id, o.captured};
            } else if constexpr (std::is_same_v<T, SetAttrOp>) {
                return SetAttrOp{o.id, o.attr, o.new_value, o.old_value};
            } else if constexpr (std::is_same_v<T, AddEdgeOp>) {
                return RemoveEdgeOp{o.id, o.edge};
            } else {
                return AddEdgeOp{o.id, o.captured};
            }
        },
        op);
}

std::string edit_op_name(const EditOp& op) {
    switch (op.index()) {
        case 0: return "add-node";
        case 1: return "remove-node";
        case 2: return "set-attr";
        case 3: return "add-edge";
        default: return "remove-edge";
    }
}

const std::string& edit_op_target(const EditOp& op) {
    return std::visit([](const auto& o) -> const std::string& { return o.id; }, op);
}

void apply_edit_op(ReflectionModel& model, const EditOp& op) {
    std::visit(
        [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, AddNodeOp>) {
                model.add_node(o.id, o.node);
            } else if constexpr (std::is_same_v<T, RemoveNodeOp>) {
                model.remove_node(o.id);
            } else if constexpr (std::is_same_v<T, SetAttrOp>) {
                const Scalar* cur = model.attr(o.id, o.attr);
                if (!cur)
                    throw ModelError(ErrorCode::StaleOp,
                                     "set_attr: '" + o.id + "." + o.attr + "' does not exist");
                if (kind_of(*cur) != kind_of(o.new_value) &&
                    !(is_numeric(*cur) && is_numeric(o.new_value)))
                    throw ModelError(ErrorCode::TypeViolation,
                                     "set_attr: kind mismatch on '" + o.id + "." + o.attr + "'");
                model.set_attr(o.id, o.attr, o.new_value);
            } else if constexpr (std::is_same_v<T, AddEdgeOp>) {
                model.add_edge(o.id, o.edge);
            } else {
                model.remove_edge(o.id);
            }
        },
        op);
}

void Transaction::require_open() const {
    if (status_ != TxnStatus::Open)
        throw ModelError(ErrorCode::TxnClosed, "transaction " + std::to_string(id_) + " is closed");
}

std::pair<EditOp, EditOp> Transaction::apply(const EditOp& op) {
    require_open();
    EditOp normalized = op;
    // capture the actual removed/old content so inversion is total
    if (auto* rn = std::get_if<RemoveNodeOp>(&normalized)) {
        const Node* n = model_->node(rn->id);
        if (!n) throw ModelError(ErrorCode::StaleOp, "remove_node: unknown node '" + rn->id + "'");
        rn->captured = *n;
    } else if (auto* re = std::get_if<RemoveEdgeOp>(&normalized)) {
        const Edge* e = model_->edge(re->id);
        if (!e) throw ModelError(ErrorCode::StaleOp, "remove_edge: unknown edge '" + re->id + "'");
        re->captured = *e;
    } else if (auto* sa = std::get_if<SetAttrOp>(&normalized)) {
        const Scalar* cur = model_->attr(sa->id, sa->attr);
        if (!cur)
            throw ModelError(ErrorCode::StaleOp,
                             "set_attr: '" + sa->id + "." + sa->attr + "' does not exist");
        sa->old_value = *cur;
    }
    apply_edit_op(*model_, normalized);
    ops_.push_back(normalized);
    return {normalized, inverse(normalized)};
}

void Transaction::rollback_to(std::size_t mark) {
    require_open();
    while (ops_.size() > mark) {
        apply_edit_op(*model_, inverse(ops_.back()));
        ops_.pop_back();
    }
}

std::vector<EditOp> Transaction::commit() {
    require_open();
    status_ = TxnStatus::Committed;
    model_->write_locked_ = false;
    return ops_;
}

void Transaction::rollback() {
    require_open();
    // inverses in strict reverse order
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) apply_edit_op(*model_, inverse(*it));
    status_ = TxnStatus::RolledBack;
    model_->write_locked_ = false;
}

Transaction& TransactionManager::begin() {
    if (has_open())
        throw ModelError(ErrorCode::AlreadyOpen, "model already has an open transaction");
    current_ = std::make_unique<Transaction>(next_id_++, *model_);
    return *current_;
}

} // namespace amrt
