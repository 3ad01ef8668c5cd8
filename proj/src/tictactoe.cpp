#include "proxysync/tictactoe.hpp"

#include <string>

#include "proxysync/errors.hpp"

namespace proxysync {

const char* cell_name(Cell c) {
  switch (c) {
    case Cell::Empty: return "empty";
    case Cell::X: return "x";
    case Cell::O: return "o";
  }
  return "unknown";
}

const char* game_result_name(GameResult r) {
  switch (r) {
    case GameResult::None: return "none";
    case GameResult::X: return "x";
    case GameResult::O: return "o";
    case GameResult::Draw: return "draw";
  }
  return "unknown";
}

TicTacToeBoard ttt_apply(const TicTacToeBoard& board, int cell, Cell mark) {
  if (cell < 1 || cell > 9) raise(Err::BadTileIndex, "cell " + std::to_string(cell));
  if (ttt_winner(board) != GameResult::None) {
    raise(Err::OutOfTurn, "the game is already over");
  }
  if (mark != board.next) raise(Err::OutOfTurn, std::string(cell_name(mark)) + " moved twice");
  if (board.cells[cell - 1] != Cell::Empty) {
    raise(Err::CellOccupied, "cell " + std::to_string(cell) + " is taken");
  }
  TicTacToeBoard out = board;
  out.cells[cell - 1] = mark;
  out.next = (mark == Cell::X) ? Cell::O : Cell::X;
  return out;
}

GameResult ttt_winner(const TicTacToeBoard& board) {
  static constexpr int kLines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                       {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
  for (const auto& line : kLines) {
    Cell a = board.cells[line[0]];
    if (a != Cell::Empty && a == board.cells[line[1]] && a == board.cells[line[2]]) {
      return a == Cell::X ? GameResult::X : GameResult::O;
    }
  }
  for (Cell c : board.cells) {
    if (c == Cell::Empty) return GameResult::None;
  }
  return GameResult::Draw;
}

}  // namespace proxysync
