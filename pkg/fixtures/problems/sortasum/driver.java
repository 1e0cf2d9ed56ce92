import java.util.Scanner;

public class Main {

    {{SUBMISSION}}

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int a = Integer.parseInt(in.nextLine().trim());
        int b = Integer.parseInt(in.nextLine().trim());
        Main solver = new Main();
        System.out.println(solver.sortaSum(a, b));
    }
}
