import java.util.Scanner;

public class Main {

    {{SUBMISSION}}

    static String parseText(String line) {
        String body = line.trim();
        return body.substring(1, body.length() - 1);
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        String str = parseText(in.nextLine());
        Main solver = new Main();
        String result = solver.frontBack(str);
        System.out.println("\"" + result + "\"");
    }
}
